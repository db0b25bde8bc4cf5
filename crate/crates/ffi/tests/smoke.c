#include <stdio.h>
#include <string.h>
#include "excisionlab.h"

int main(void) {
    ExlExtension *ext = NULL;
    if (exl_extension_demo("t2-corner", &ext) != EXL_STATUS_OK) return 1;
    uintptr_t dim = 0;
    if (exl_homology_dimension(ext, "hc", "relative", 0, &dim) != EXL_STATUS_OK || dim != 1) return 2;
    const char *chain = "{\"degree\": 1, \"terms\": [{\"coeff\": \"1\", \"slots\": [[\"1\",\"0\",\"0\"], [\"0\",\"0\",\"1\"]]}]}";
    char *cert = NULL;
    if (exl_inverse_excision_json(ext, chain, &cert) != EXL_STATUS_OK) return 3;
    if (exl_verify_certificate_json(cert) != EXL_STATUS_OK) return 4;
    exl_string_free(cert);
    if (exl_extension_demo("nope", &ext) == EXL_STATUS_OK) return 5;
    if (strstr(exl_last_error_message(), "unknown demo") == NULL) return 6;
    exl_extension_free(ext);
    puts("ok");
    return 0;
}
