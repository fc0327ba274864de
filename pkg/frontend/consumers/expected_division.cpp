// No-exceptions consumer: the same fallible calls, but the result
// arrives as Swift::Expected<double> and is tested with has_value().
//
// Build with -fno-exceptions. Expected stdout:
//   divisorIsZero
//   result = 2.0
#include <cassert>
#include <cstdio>

#include "Functions.h"

namespace {

// An Expected owns its error for the whole enclosing scope, so the
// calls live in a helper: its locals are gone before main counts the
// surviving boxes.
int run() {
    auto errorResult = Functions::division(1, 0);
    if (errorResult.has_value()) {
        printf("result = %.1f\n", errorResult.value());
    } else {
        auto optionalError = errorResult.error().as<Functions::DivByZero>();
        assert(optionalError.isSome());

        auto errorValue = optionalError.get();
        assert(errorValue == Functions::DivByZero::divisorIsZero);
        errorValue.getMessage();
    }

    auto goodResult = Functions::division(4, 2);
    if (goodResult.has_value()) {
        printf("result = %.1f\n", goodResult.value());
    } else {
        auto optionalError = goodResult.error().as<Functions::DivByZero>();
        assert(optionalError.isSome());

        auto errorValue = optionalError.get();
        errorValue.getMessage();
    }
    return 0;
}

}  // namespace

int main() {
    int rc = run();
    if (rc != 0) {
        return rc;
    }
    if (eb_live_errors() != 0) {
        fprintf(stderr, "live error boxes at exit: %llu\n",
                (unsigned long long)eb_live_errors());
        return 1;
    }
    return 0;
}
