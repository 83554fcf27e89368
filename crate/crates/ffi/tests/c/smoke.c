#include <stdio.h>
#include <string.h>

#include "smarandache.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed: %s (line %d)\n", #cond, __LINE__); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    uint64_t digits = 0;
    CHECK(smd_digits_at(SMD_KIND_CONSECUTIVE, SMD_BASE_TRIANGULAR, 1000, &digits) == SMD_STATUS_OK);
    CHECK(digits == 5354);

    SmdGenerator *gen = NULL;
    CHECK(smd_generator_new(SMD_KIND_MIRROR, SMD_BASE_TRIANGULAR, &gen) == SMD_STATUS_OK);
    char *value = NULL;
    uint64_t index = 0;
    CHECK(smd_generator_next(gen, &index, &value) == SMD_STATUS_OK);
    smd_string_free(value);
    CHECK(smd_generator_next(gen, &index, &value) == SMD_STATUS_OK);
    CHECK(index == 2 && strcmp(value, "313") == 0);
    smd_string_free(value);
    smd_generator_free(gen);

    SmdPrimeStatus status;
    CHECK(smd_is_probable_prime("313", 0, 2, 0, &status) == SMD_STATUS_OK);
    CHECK(status == SMD_PRIME_STATUS_PRIME);

    CHECK(smd_term_at(SMD_KIND_SYMMETRIC, SMD_BASE_NATURAL, 0, &value) == SMD_STATUS_INVALID_ARGUMENT);
    CHECK(smd_last_error() != NULL);

    printf("ok %s\n", smd_version());
    return 0;
}
