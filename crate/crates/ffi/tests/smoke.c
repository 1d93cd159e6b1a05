#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "stackres.h"

static char *slurp(const char *path) {
    FILE *f = fopen(path, "rb");
    if (!f) return NULL;
    fseek(f, 0, SEEK_END);
    long n = ftell(f);
    rewind(f);
    char *buf = malloc(n + 1);
    if (fread(buf, 1, n, f) != (size_t)n) { fclose(f); free(buf); return NULL; }
    buf[n] = 0;
    fclose(f);
    return buf;
}

int main(int argc, char **argv) {
    if (argc < 2) return 2;
    char *doc = slurp(argv[1]);
    if (!doc) return 2;
    StackresInstance *inst = NULL;
    if (stackres_instance_parse(doc, false, &inst) != STACKRES_STATUS_OK) {
        fprintf(stderr, "%s\n", stackres_last_error());
        return 1;
    }
    free(doc);
    char *evidence = NULL;
    bool ok = false;
    if (stackres_roundtrip(inst, "G", "S", "R1", &evidence, &ok) != STACKRES_STATUS_OK) {
        fprintf(stderr, "%s\n", stackres_last_error());
        return 1;
    }
    printf("roundtrip %s\n", ok ? "ok" : "failed");
    stackres_string_free(evidence);
    if (stackres_roundtrip(inst, "nope", "S", "R1", &evidence, &ok) != STACKRES_STATUS_DANGLING_REFERENCE) return 1;
    stackres_instance_free(inst);
    return ok ? 0 : 1;
}
