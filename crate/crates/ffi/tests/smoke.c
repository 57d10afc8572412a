#include <stdio.h>
#include <string.h>
#include "hochdef.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, hd_last_error()); return 1; } } while (0)

int main(void) {
    HdAlgebra *a = NULL;
    size_t d = 0;
    CHECK(hd_algebra_builtin("kronecker", &a) == HD_STATUS_OK);
    CHECK(hd_algebra_hh_dimension(a, 1, &d) == HD_STATUS_OK && d == 3);
    hd_algebra_free(a);

    HdLattice *l = NULL, *m = NULL;
    CHECK(hd_lattice_from_text("n 2\nd 1\n1 2\n0 1\nranks 1 1\n", &l) == HD_STATUS_OK);
    CHECK(hd_lattice_mutate(l, "L1", &m) == HD_STATUS_OK);
    int64_t g = 0;
    CHECK(hd_lattice_gram_entry(m, 0, 1, &g) == HD_STATUS_OK && g == 2);
    HdReport *r = NULL;
    bool ok = false;
    CHECK(hd_lattice_helix_check(l, &r) == HD_STATUS_OK);
    CHECK(hd_report_passed(r, &ok) == HD_STATUS_OK && ok);
    hd_report_free(r);
    hd_lattice_free(m);
    hd_lattice_free(l);

    CHECK(hd_algebra_builtin("nope", &a) == HD_STATUS_OUT_OF_RANGE);
    CHECK(strstr(hd_last_error(), "nope") != NULL);
    puts("ok");
    return 0;
}
