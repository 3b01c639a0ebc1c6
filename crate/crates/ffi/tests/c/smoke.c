#include <stdio.h>
#include <string.h>
#include "parahoric.h"

int main(void) {
    PfSession *s = NULL;
    if (pf_session_new("A1", "id", 1, &s) != PF_STATUS_OK) return 1;
    size_t order = 0;
    if (pf_weyl_order(s, &order) != PF_STATUS_OK || order != 2) return 2;
    char *text = NULL;
    if (pf_base_change(s, "1", NULL, &text) != PF_STATUS_OK) return 3;
    printf("%s\n", text);
    pf_string_free(text);
    PfSession *bad = NULL;
    if (pf_session_new("Z9", "id", 1, &bad) != PF_STATUS_UNSUPPORTED || bad != NULL || pf_last_error() == NULL) return 4;
    pf_session_free(s);
    return 0;
}
