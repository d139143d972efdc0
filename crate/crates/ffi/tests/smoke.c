#include <math.h>
#include <stdio.h>
#include "nonlocal_wave.h"

#define CHECK(call)                                                      \
    do {                                                                 \
        NlwStatus s_ = (call);                                           \
        if (s_ != NLW_STATUS_OK) {                                       \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_,            \
                    nlw_last_error_message());                           \
            return 1;                                                    \
        }                                                                \
    } while (0)

int main(void) {
    NlwKernel *kernel = NULL;
    CHECK(nlw_kernel_new(1, 1.0, 3.0, &kernel));
    double m = 0.0;
    CHECK(nlw_multiplier(kernel, 2.0, NLW_PATH_ROUTED, &m));
    if (m != -4.0) return 2;

    NlwTable *table = NULL;
    CHECK(nlw_table_build(kernel, 4, &table));
    if (nlw_table_len(table) != 5) return 3;

    NlwField *f = NULL, *g = NULL, *u = NULL;
    CHECK(nlw_field_synthetic(1, 4, 2.0, 7, &f));
    CHECK(nlw_field_synthetic(1, 4, 2.0, 8, &g));
    CHECK(nlw_solve(table, f, g, NULL, 0.0, 0, &u));
    int64_t k = 1;
    double re0, im0, re1, im1;
    CHECK(nlw_field_coeff(f, &k, 1, &re0, &im0));
    CHECK(nlw_field_coeff(u, &k, 1, &re1, &im1));
    if (re0 != re1 || im0 != im1) return 4;

    if (nlw_kernel_new(1, -1.0, 0.0, &kernel) != NLW_STATUS_DOMAIN) return 5;
    if (nlw_last_error_message() == NULL) return 6;

    char *json = NULL;
    CHECK(nlw_field_to_json(u, &json));
    printf("%s\n", json);
    nlw_string_free(json);

    nlw_field_free(u);
    nlw_field_free(g);
    nlw_field_free(f);
    nlw_table_free(table);
    nlw_kernel_free(kernel);
    return 0;
}
