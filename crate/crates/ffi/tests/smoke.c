#include <stdio.h>
#include <string.h>
#include "et0l.h"

static const char *GRAMMAR =
    "{\"terminals\":[\"a\",\"b\"],\"nonterminals\":[\"S\",\"A\",\"B\"],\"start\":\"S\","
    "\"tables\":{\"p\":{\"S\":[\"S S\",\"S\",\"A B\"]},\"q\":{\"A\":[\"a A\"],\"B\":[\"b B\"]},"
    "\"r\":{\"A\":[\"\"],\"B\":[\"\"]}},\"control\":\"p*q*r\"}";

int main(void) {
    Et0lGrammarHandle *g = NULL;
    if (et0l_grammar_parse(GRAMMAR, &g) != ET0L_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", et0l_last_error());
        return 1;
    }
    int verdict = 0;
    if (et0l_grammar_contains(g, "aabbaabb", 8, &verdict) != ET0L_STATUS_OK || verdict != 1) return 2;
    if (et0l_grammar_contains(g, "aabbab", 8, &verdict) != ET0L_STATUS_OK || verdict != 0) return 3;

    Et0lMachineHandle *m = NULL;
    if (et0l_grammar_to_machine(g, &m) != ET0L_STATUS_OK) return 4;
    bool accepted = false;
    if (et0l_machine_accepts(m, "abab", 6, -1, &accepted) != ET0L_STATUS_OK || !accepted) return 5;

    char *words = NULL;
    if (et0l_grammar_enumerate(g, 4, 8, &words) != ET0L_STATUS_OK) return 6;
    if (strstr(words, "\"abab\"") == NULL) return 7;
    et0l_string_free(words);

    Et0lGrammarHandle *bad = NULL;
    if (et0l_grammar_parse("{", &bad) != ET0L_STATUS_SCHEMA || bad != NULL) return 8;
    if (strlen(et0l_last_error()) == 0) return 9;

    et0l_machine_free(m);
    et0l_grammar_free(g);
    printf("ok\n");
    return 0;
}
