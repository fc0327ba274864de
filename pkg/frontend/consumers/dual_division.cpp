// Dual-mode consumer: compiles under exceptions and under
// -fno-exceptions, and must print byte-identical output either way.
// Each probe reports one line per call, the same line in both modes.
#include <cstdint>
#include <cstdio>

#include "Functions.h"

namespace {

// printf("%.1f") renders negative zero as "-0.0"; fold it into +0.0 so
// the printed text depends only on the numeric value.
double plusZero(double value) { return value == 0.0 ? 0.0 : value; }

void printThrown(const char* display, const Swift::Error& e) {
    auto typed = e.as<Functions::DivByZero>();
    if (typed.isSome()) {
        printf("%s threw DivByZero.%s\n", display, typed.get().messageText());
    } else {
        printf("%s threw an unrecognized error\n", display);
    }
}

void probe(const char* display, int64_t a, int64_t b) {
#ifdef __cpp_exceptions
    try {
        double value = Functions::division(a, b);
        printf("%s = %.1f\n", display, plusZero(value));
    } catch (Swift::Error& e) {
        printThrown(display, e);
    }
#else
    auto result = Functions::division(a, b);
    if (result.has_value()) {
        printf("%s = %.1f\n", display, plusZero(result.value()));
    } else {
        printThrown(display, result.error());
    }
#endif
}

}  // namespace

int main() {
    probe("division(0, 0)", 0, 0);
    probe("division(1, 0)", 1, 0);
    probe("division(4, 2)", 4, 2);
    probe("division(-7, 2)", -7, 2);
    probe("division(9, 4)", 9, 4);

    if (eb_live_errors() != 0) {
        fprintf(stderr, "live error boxes at exit: %llu\n",
                (unsigned long long)eb_live_errors());
        return 1;
    }
    return 0;
}
