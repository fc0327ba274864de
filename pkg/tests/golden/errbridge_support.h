// errbridge_support.h
// Generated by errbridge; do not edit.
#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <new>

// Runtime call surface (C ABI). Handles are opaque 64-bit tokens and 0
// is the null handle. eb_invoke statuses: 0 returned, 1 threw (the out
// handle owns one reference), 2 trapped. Value cells carry a tag
// (0 unit, 1 int64, 2 float64, 3 bool) and an 8-byte payload.
extern "C" {

typedef struct EbValue {
  uint8_t tag;
  union {
    int64_t i64;
    double f64;
    uint8_t b;
  } payload;
} EbValue;

int64_t eb_load_module(const unsigned char* bytes, size_t len);
int32_t eb_invoke(int64_t module_id, int64_t fn_index, const EbValue* args,
                  size_t argc, uint64_t* out_error, EbValue* out_ret);
uint64_t eb_error_retain(uint64_t handle);
void eb_error_release(uint64_t handle);
int64_t eb_error_dyncast(uint64_t handle, uint64_t type_hash,
                         const char* qualified_name);
size_t eb_error_message(uint64_t handle, char* buf, size_t cap);
uint64_t eb_live_errors(void);

}  // extern "C"

namespace Swift {

namespace _support {

// Abort with a diagnostic. Contract violations funnel through here so
// behavior is identical with and without exception support.
[[noreturn]] inline void trap(const char* what) {
  std::fprintf(stderr, "errbridge trap: %s\n", what);
  std::abort();
}

// Read <dir>/<name>.ebm, where dir comes from ERRBRIDGE_MODULE_PATH,
// and register it with the runtime. Traps on any failure: a consumer
// cannot do anything useful without its module.
inline int64_t bootstrapModule(const char* name) {
  const char* dir = std::getenv("ERRBRIDGE_MODULE_PATH");
  if (dir == nullptr) trap("ERRBRIDGE_MODULE_PATH is not set");
  char path[1024];
  std::snprintf(path, sizeof path, "%s/%s.ebm", dir, name);
  std::FILE* file = std::fopen(path, "rb");
  if (file == nullptr) trap("module registry file not found");
  std::fseek(file, 0, SEEK_END);
  long size = std::ftell(file);
  if (size < 0) {
    std::fclose(file);
    trap("module registry file is unreadable");
  }
  std::fseek(file, 0, SEEK_SET);
  unsigned char* bytes =
      static_cast<unsigned char*>(std::malloc(static_cast<size_t>(size) + 1));
  if (bytes == nullptr) {
    std::fclose(file);
    trap("out of memory reading module registry");
  }
  size_t got = std::fread(bytes, 1, static_cast<size_t>(size), file);
  std::fclose(file);
  int64_t moduleId = -1;
  if (got == static_cast<size_t>(size)) {
    moduleId = eb_load_module(bytes, got);
  }
  std::free(bytes);
  if (moduleId < 0) trap("module registry was rejected");
  return moduleId;
}

}  // namespace _support

// Value-or-nothing container for checked downcast results. get() on an
// empty optional traps rather than throwing, so both error-handling
// modes behave the same.
template <class T>
class Optional {
 public:
  static Optional none() { return Optional(); }
  static Optional some(T value) { return Optional(value); }

  bool isSome() const { return some_; }

  T get() const {
    if (!some_) _support::trap("Optional::get() on none");
    return value_;
  }

 private:
  Optional() : some_(false), value_() {}
  explicit Optional(T value) : some_(true), value_(value) {}

  bool some_;
  T value_;
};

// Opaque wrapper around a thrown error's handle.
//
// Ownership: construction from a raw handle ADOPTS the one reference
// the dispatcher hands the caller; copies retain; destruction
// releases. Every live wrapper owns exactly one reference, so the box
// dies with its last wrapper.
class Error {
 public:
  explicit Error(uint64_t opaqueError) : handle_(opaqueError) {
    if (handle_ == 0) _support::trap("Error wrapped the null handle");
  }

  Error(const Error& other) : handle_(eb_error_retain(other.handle_)) {}

  Error& operator=(const Error& other) {
    if (this != &other) {
      eb_error_release(handle_);
      handle_ = eb_error_retain(other.handle_);
    }
    return *this;
  }

  ~Error() { eb_error_release(handle_); }

  // Checked downcast to a generated error enum mirror: the typed case
  // on a match, none otherwise. Never changes the refcount.
  template <class T>
  Optional<T> as() const {
    int64_t caseIndex = eb_error_dyncast(handle_, T::typeHash, T::typeName);
    if (caseIndex < 0) return Optional<T>::none();
    return Optional<T>::some(T(static_cast<typename T::Case>(caseIndex)));
  }

  // Copy the message into buf, truncating to cap; returns the full
  // message length in bytes.
  size_t messageText(char* buf, size_t cap) const {
    return eb_error_message(handle_, buf, cap);
  }

  // Print the message on standard output.
  void getMessage() const {
    char buf[256];
    size_t len = eb_error_message(handle_, buf, sizeof buf - 1);
    if (len > sizeof buf - 1) len = sizeof buf - 1;
    buf[len] = '\0';
    std::printf("%s\n", buf);
  }

  uint64_t rawHandle() const { return handle_; }

 private:
  uint64_t handle_;
};

// Result of a fallible call: the returned value or the thrown error,
// held in one buffer beside a discriminator. error() borrows; the
// Expected keeps ownership until it is destroyed.
template <class T>
class Expected {
 public:
  explicit Expected(T value) : hasValue_(true) { new (&slot_.value) T(value); }

  explicit Expected(const Error& error) : hasValue_(false) {
    new (&slot_.error) Error(error);
  }

  Expected(const Expected& other) : hasValue_(other.hasValue_) {
    if (hasValue_) {
      new (&slot_.value) T(other.slot_.value);
    } else {
      new (&slot_.error) Error(other.slot_.error);
    }
  }

  Expected& operator=(const Expected& other) {
    if (this != &other) {
      destroySlot();
      hasValue_ = other.hasValue_;
      if (hasValue_) {
        new (&slot_.value) T(other.slot_.value);
      } else {
        new (&slot_.error) Error(other.slot_.error);
      }
    }
    return *this;
  }

  ~Expected() { destroySlot(); }

  bool has_value() const { return hasValue_; }

  T value() const {
    if (!hasValue_) _support::trap("Expected::value() in the error state");
    return slot_.value;
  }

  const Error& error() const {
    if (hasValue_) _support::trap("Expected::error() in the value state");
    return slot_.error;
  }

 private:
  void destroySlot() {
    if (hasValue_) {
      slot_.value.~T();
    } else {
      slot_.error.~Error();
    }
  }

  union Slot {
    Slot() {}
    ~Slot() {}
    T value;
    Error error;
  };

  Slot slot_;
  bool hasValue_;
};

// A function with no return value stores only the error alternative.
template <>
class Expected<void> {
 public:
  Expected() : hasValue_(true) {}

  explicit Expected(const Error& error) : hasValue_(false) {
    new (&slot_.error) Error(error);
  }

  Expected(const Expected& other) : hasValue_(other.hasValue_) {
    if (!hasValue_) new (&slot_.error) Error(other.slot_.error);
  }

  Expected& operator=(const Expected& other) {
    if (this != &other) {
      if (!hasValue_) slot_.error.~Error();
      hasValue_ = other.hasValue_;
      if (!hasValue_) new (&slot_.error) Error(other.slot_.error);
    }
    return *this;
  }

  ~Expected() {
    if (!hasValue_) slot_.error.~Error();
  }

  bool has_value() const { return hasValue_; }

  void value() const {
    if (!hasValue_) _support::trap("Expected::value() in the error state");
  }

  const Error& error() const {
    if (hasValue_) _support::trap("Expected::error() in the value state");
    return slot_.error;
  }

 private:
  union Slot {
    Slot() {}
    ~Slot() {}
    unsigned char empty;
    Error error;
  };

  Slot slot_;
  bool hasValue_;
};

}  // namespace Swift

// Error-handling mode gate. Exactly one branch is active per
// translation unit: with exceptions a throwing function returns its
// plain value and throws Swift::Error; without, it returns
// Swift::Expected<T> carrying one alternative or the other.
#ifdef __cpp_exceptions

namespace Swift {
template <class T>
using ThrowingResult = T;
}  // namespace Swift

#define EB_RETURN_THUNK(T, v) v
#define EB_RETURN_VOID_THUNK()

#else

namespace Swift {
template <class T>
using ThrowingResult = Swift::Expected<T>;
}  // namespace Swift

#define EB_RETURN_THUNK(T, v) Swift::Expected<T>(v)
#define EB_RETURN_VOID_THUNK() Swift::Expected<void>()

#endif  // __cpp_exceptions
