#include <stdio.h>
#include <string.h>
#include "weylkit.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "line %d: %s (%s)\n", __LINE__, #cond, wk_last_error()); return 1; } } while (0)

int main(void) {
    size_t delta[] = {1, 3};
    WkDecomposition *dec = NULL;
    bool swapped = true;
    CHECK(wk_decompose(5, delta, 2, &dec, &swapped) == WK_OK);
    CHECK(!swapped);
    size_t n = 0;
    CHECK(wk_decomposition_orbit_count(dec, &n) == WK_OK && n == 3);
    char *json = NULL;
    CHECK(wk_decomposition_to_json(dec, &json) == WK_OK);
    CHECK(strstr(json, "\"orbits\":[[1,2,3],[4],[5]]") != NULL);
    wk_string_free(json);
    wk_decomposition_free(dec);

    size_t bad[] = {9};
    CHECK(wk_decompose(4, bad, 1, &dec, NULL) == WK_ERR_INVALID_ARGUMENT);
    CHECK(strlen(wk_last_error()) > 0);

    WkShadow *sh = NULL;
    CHECK(wk_shadow_from_json("[1,2", &sh) == WK_ERR_JSON);

    bool passed = false;
    char *report = NULL;
    CHECK(wk_verify(WK_SUITE_TABLE1, 4, 0, &report, &passed) == WK_OK && passed);
    wk_string_free(report);

    printf("ok %s\n", wk_version());
    return 0;
}
