#include <stdio.h>
#include <string.h>

#include "envlab.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__,        \
                    __LINE__, #cond, envlab_last_error());       \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    EnvlabModel *toy = NULL;
    char *json = NULL;

    CHECK(envlab_model_new("toy", 0, &toy) == ENVLAB_STATUS_OK);
    CHECK(envlab_model_len(toy) == 2);
    CHECK(strcmp(envlab_model_label(toy, 0), "p-") == 0);

    CHECK(envlab_compute(toy, ENVLAB_COMPUTE_LIMIT, "1/3", 1, NULL, NULL, &json) == ENVLAB_STATUS_OK);
    CHECK(strstr(json, "1/(-1 + 1*a)") != NULL);
    envlab_string_free(json);

    CHECK(envlab_compute(toy, ENVLAB_COMPUTE_LIMIT, "0.3", 1, NULL, NULL, &json) ==
          ENVLAB_STATUS_INVALID_ARGUMENT);
    CHECK(strlen(envlab_last_error()) > 0);

    CHECK(envlab_verify(toy, ENVLAB_SUITE_QUASIPERIODS, NULL, 1, &json) == ENVLAB_STATUS_OK);
    CHECK(strstr(json, "\"passed\": true") != NULL);
    envlab_string_free(json);

    envlab_model_free(toy);
    printf("ok %s\n", envlab_version());
    return 0;
}
