// Exceptions-mode consumer: calls a fallible bridged function inside
// try/catch, downcasts the caught error, and checks the thrown case.
//
// Expected stdout:
//   bothAreZero
//   result = 2.0
#include <cassert>
#include <cstdio>

#include "Functions.h"

int main() {
    // Both operands zero: the call throws and the catch block runs.
    try {
        auto result = Functions::division(0, 0);
        printf("result = %.1f\n", result);
    } catch (Swift::Error& e) {
        auto errorOpt = e.as<Functions::DivByZero>();
        assert(errorOpt.isSome());

        auto errorVal = errorOpt.get();
        assert(errorVal == Functions::DivByZero::bothAreZero);
        errorVal.getMessage();
    }

    // A well-formed division: the value comes back and is printed.
    try {
        float result = Functions::division(4, 2);
        printf("result = %.1f\n", result);
    } catch (Swift::Error& e) {
        auto errorOpt = e.as<Functions::DivByZero>();
        assert(errorOpt.isSome());

        auto errorVal = errorOpt.get();
        errorVal.getMessage();
    }

    if (eb_live_errors() != 0) {
        fprintf(stderr, "live error boxes at exit: %llu\n",
                (unsigned long long)eb_live_errors());
        return 1;
    }
    return 0;
}
