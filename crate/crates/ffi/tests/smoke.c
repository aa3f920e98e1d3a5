#include <stdio.h>
#include <string.h>

#include "congestion_gibbs.h"

static const char *GAME =
    "players = 2\n"
    "resource a costs = [0, 6]\n"
    "resource b costs = [0, 6]\n"
    "structure = ep { par(arc(a), arc(b)) }\n";

int main(void) {
    CgGame *game = NULL;
    if (cg_game_parse(GAME, &game) != CG_STATUS_OK) {
        return 1;
    }
    size_t out[2 * 16];
    if (cg_sample_gibbs(game, 1.0, 0.01, 4.0, CG_WEIGHT_MODE_EXACT, 7, 16, out, 32) != CG_STATUS_OK) {
        return 2;
    }
    for (int i = 0; i < 16; i++) {
        printf("%zu %zu\n", out[2 * i], out[2 * i + 1]);
    }
    char buf[64];
    size_t needed = 0;
    size_t k[2] = {1, 1};
    if (cg_count_bipartite(k, 2, k, 2, buf, sizeof buf, &needed) != CG_STATUS_OK || strcmp(buf, "2") != 0) {
        return 3;
    }
    if (cg_game_parse("players = x", &game) != CG_STATUS_PARSE_ERROR) {
        return 4;
    }
    char msg[256];
    cg_last_error_message(msg, sizeof msg);
    printf("error: %s\n", msg);
    cg_game_free(game);
    return 0;
}
