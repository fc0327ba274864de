// errbridge_runtime.cpp
//
// Self-contained implementation of the errbridge runtime ABI declared
// in the generated support header: module loading, call dispatch, and
// refcounted error boxes. One translation unit, standard library only,
// no exceptions anywhere, so it builds identically with -fexceptions
// and -fno-exceptions.
//
// Behavioral contract (kept in lockstep with the reference runtime):
//   * handles are opaque nonzero tokens; 0 is null
//   * eb_invoke status: 0 returned, 1 threw (+1 reference to caller),
//     2 trapped (diagnostic on stderr, nothing allocated)
//   * retain/release of null is a no-op; any use of a dead or unknown
//     handle aborts the process with a diagnostic
//   * Int is two's-complement 64-bit with wrapping + - *
//   * Int division truncates toward zero; dividing by zero traps
//   * Float follows IEEE 754 binary64; float division never traps
//   * && and || short-circuit; operands evaluate left to right
//   * an Int returned where Float is declared widens at the boundary

#include <cerrno>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

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

namespace {

// ---------------------------------------------------------------------------
// Minimal JSON reader, just enough for the canonical module form.
// ---------------------------------------------------------------------------

struct JsonValue {
  enum class Kind { Null, Bool, Int, Double, Str, Arr, Obj };

  Kind kind = Kind::Null;
  bool boolean = false;
  int64_t integer = 0;
  double number = 0.0;
  std::string str;
  std::vector<JsonValue> arr;
  std::vector<std::pair<std::string, JsonValue>> obj;

  const JsonValue* find(const char* key) const {
    for (const auto& entry : obj) {
      if (entry.first == key) return &entry.second;
    }
    return nullptr;
  }
};

class JsonParser {
 public:
  JsonParser(const char* data, size_t len) : p_(data), end_(data + len) {}

  bool parse(JsonValue& out) {
    if (!parseValue(out, 0)) return false;
    skipSpace();
    if (p_ != end_) return fail("trailing data after document");
    return true;
  }

  const std::string& error() const { return error_; }

 private:
  static const int kMaxDepth = 512;

  bool fail(const char* what) {
    if (error_.empty()) error_ = what;
    return false;
  }

  void skipSpace() {
    while (p_ != end_ && (*p_ == ' ' || *p_ == '\t' || *p_ == '\n' || *p_ == '\r')) {
      ++p_;
    }
  }

  bool literal(const char* word) {
    size_t len = std::strlen(word);
    if (static_cast<size_t>(end_ - p_) < len) return false;
    if (std::strncmp(p_, word, len) != 0) return false;
    p_ += len;
    return true;
  }

  bool parseValue(JsonValue& out, int depth) {
    if (depth > kMaxDepth) return fail("document nests too deeply");
    skipSpace();
    if (p_ == end_) return fail("unexpected end of document");
    char c = *p_;
    if (c == 'n') {
      if (!literal("null")) return fail("bad literal");
      out.kind = JsonValue::Kind::Null;
      return true;
    }
    if (c == 't') {
      if (!literal("true")) return fail("bad literal");
      out.kind = JsonValue::Kind::Bool;
      out.boolean = true;
      return true;
    }
    if (c == 'f') {
      if (!literal("false")) return fail("bad literal");
      out.kind = JsonValue::Kind::Bool;
      out.boolean = false;
      return true;
    }
    if (c == '"') return parseString(out.str) && ((out.kind = JsonValue::Kind::Str), true);
    if (c == '[') return parseArray(out, depth);
    if (c == '{') return parseObject(out, depth);
    return parseNumber(out);
  }

  bool parseArray(JsonValue& out, int depth) {
    ++p_;  // consume [
    out.kind = JsonValue::Kind::Arr;
    skipSpace();
    if (p_ != end_ && *p_ == ']') {
      ++p_;
      return true;
    }
    for (;;) {
      out.arr.emplace_back();
      if (!parseValue(out.arr.back(), depth + 1)) return false;
      skipSpace();
      if (p_ == end_) return fail("unterminated array");
      if (*p_ == ',') {
        ++p_;
        continue;
      }
      if (*p_ == ']') {
        ++p_;
        return true;
      }
      return fail("expected ',' or ']' in array");
    }
  }

  bool parseObject(JsonValue& out, int depth) {
    ++p_;  // consume {
    out.kind = JsonValue::Kind::Obj;
    skipSpace();
    if (p_ != end_ && *p_ == '}') {
      ++p_;
      return true;
    }
    for (;;) {
      skipSpace();
      if (p_ == end_ || *p_ != '"') return fail("expected object key");
      std::string key;
      if (!parseString(key)) return false;
      skipSpace();
      if (p_ == end_ || *p_ != ':') return fail("expected ':' after key");
      ++p_;
      out.obj.emplace_back(std::move(key), JsonValue());
      if (!parseValue(out.obj.back().second, depth + 1)) return false;
      skipSpace();
      if (p_ == end_) return fail("unterminated object");
      if (*p_ == ',') {
        ++p_;
        continue;
      }
      if (*p_ == '}') {
        ++p_;
        return true;
      }
      return fail("expected ',' or '}' in object");
    }
  }

  bool parseString(std::string& out) {
    ++p_;  // consume opening quote
    out.clear();
    while (p_ != end_) {
      unsigned char c = static_cast<unsigned char>(*p_);
      if (c == '"') {
        ++p_;
        return true;
      }
      if (c == '\\') {
        ++p_;
        if (p_ == end_) break;
        char esc = *p_++;
        switch (esc) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case '/': out.push_back('/'); break;
          case 'b': out.push_back('\b'); break;
          case 'f': out.push_back('\f'); break;
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 't': out.push_back('\t'); break;
          case 'u': {
            unsigned code = 0;
            for (int i = 0; i < 4; ++i) {
              if (p_ == end_) return fail("truncated \\u escape");
              char h = *p_++;
              code <<= 4;
              if (h >= '0' && h <= '9') code |= static_cast<unsigned>(h - '0');
              else if (h >= 'a' && h <= 'f') code |= static_cast<unsigned>(h - 'a' + 10);
              else if (h >= 'A' && h <= 'F') code |= static_cast<unsigned>(h - 'A' + 10);
              else return fail("bad \\u escape");
            }
            if (code >= 0xD800 && code <= 0xDFFF) {
              return fail("surrogate escapes are not supported");
            }
            appendUtf8(out, code);
            break;
          }
          default:
            return fail("unknown escape");
        }
        continue;
      }
      out.push_back(static_cast<char>(c));
      ++p_;
    }
    return fail("unterminated string");
  }

  static void appendUtf8(std::string& out, unsigned code) {
    if (code < 0x80) {
      out.push_back(static_cast<char>(code));
    } else if (code < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (code >> 6)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xE0 | (code >> 12)));
      out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    }
  }

  bool parseNumber(JsonValue& out) {
    const char* start = p_;
    if (p_ != end_ && *p_ == '-') ++p_;
    bool sawDigit = false;
    bool isInteger = true;
    while (p_ != end_ && *p_ >= '0' && *p_ <= '9') {
      ++p_;
      sawDigit = true;
    }
    if (p_ != end_ && *p_ == '.') {
      isInteger = false;
      ++p_;
      while (p_ != end_ && *p_ >= '0' && *p_ <= '9') ++p_;
    }
    if (p_ != end_ && (*p_ == 'e' || *p_ == 'E')) {
      isInteger = false;
      ++p_;
      if (p_ != end_ && (*p_ == '+' || *p_ == '-')) ++p_;
      while (p_ != end_ && *p_ >= '0' && *p_ <= '9') ++p_;
    }
    if (!sawDigit) return fail("expected a value");
    std::string text(start, static_cast<size_t>(p_ - start));
    if (isInteger) {
      errno = 0;
      char* parsedEnd = nullptr;
      long long v = std::strtoll(text.c_str(), &parsedEnd, 10);
      if (errno == ERANGE || parsedEnd != text.c_str() + text.size()) {
        return fail("integer out of range");
      }
      out.kind = JsonValue::Kind::Int;
      out.integer = static_cast<int64_t>(v);
      return true;
    }
    out.kind = JsonValue::Kind::Double;
    out.number = std::strtod(text.c_str(), nullptr);
    return true;
  }

  const char* p_;
  const char* end_;
  std::string error_;
};

// ---------------------------------------------------------------------------
// Module model, decoded once at load time.
// ---------------------------------------------------------------------------

const uint8_t kTagUnit = 0;
const uint8_t kTagInt = 1;
const uint8_t kTagFloat = 2;
const uint8_t kTagBool = 3;

uint64_t fnv1a64(const std::string& text) {
  uint64_t digest = 14695981039346656037ULL;
  for (unsigned char c : text) {
    digest ^= c;
    digest *= 1099511628211ULL;
  }
  return digest;
}

struct RtValue {
  uint8_t tag = kTagUnit;
  int64_t i = 0;
  double f = 0.0;
  bool b = false;
};

enum class BinOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

enum class ExprKind { Int, Float, Bool, Param, Binary, FloatCast };

struct RtExpr {
  ExprKind kind = ExprKind::Int;
  int64_t intValue = 0;
  double floatValue = 0.0;
  bool boolValue = false;
  size_t paramIndex = 0;
  BinOp op = BinOp::Add;
  std::unique_ptr<RtExpr> lhs;
  std::unique_ptr<RtExpr> rhs;
  std::unique_ptr<RtExpr> operand;
};

enum class StmtKind { If, Return, Throw };

struct RtStmt {
  StmtKind kind = StmtKind::Return;
  std::unique_ptr<RtExpr> expr;  // if condition / return value (may be null)
  std::vector<RtStmt> thenBody;
  std::vector<RtStmt> elseBody;
  size_t enumIndex = 0;
  int64_t caseIndex = 0;
};

struct RtEnum {
  std::string name;
  std::string qualifiedName;
  uint64_t typeHash = 0;
  std::vector<std::string> cases;
};

struct RtParam {
  std::string name;
  uint8_t tag = kTagInt;
};

struct RtFunction {
  std::string name;
  std::vector<RtParam> params;
  uint8_t returnTag = kTagUnit;
  bool throws = false;
  std::vector<RtStmt> body;
};

struct RtModule {
  std::string name;
  std::vector<RtEnum> enums;
  std::vector<RtFunction> functions;
  std::vector<unsigned char> sourceBytes;
};

// ---------------------------------------------------------------------------
// Decoder: JSON document -> RtModule. Fails closed on anything odd.
// ---------------------------------------------------------------------------

struct Decoder {
  std::string error;

  bool fail(const char* what) {
    if (error.empty()) error = what;
    return false;
  }

  static bool tagForTypeName(const std::string& name, uint8_t& tag) {
    if (name == "Int64") tag = kTagInt;
    else if (name == "Float64") tag = kTagFloat;
    else if (name == "Bool") tag = kTagBool;
    else if (name == "Unit") tag = kTagUnit;
    else return false;
    return true;
  }

  bool str(const JsonValue* v, std::string& out, const char* what) {
    if (v == nullptr || v->kind != JsonValue::Kind::Str) return fail(what);
    out = v->str;
    return true;
  }

  bool decodeModule(const JsonValue& doc, RtModule& module) {
    if (doc.kind != JsonValue::Kind::Obj) return fail("module must be an object");
    if (!str(doc.find("name"), module.name, "module name must be a string")) return false;
    const JsonValue* enums = doc.find("enums");
    if (enums == nullptr || enums->kind != JsonValue::Kind::Arr) {
      return fail("module enums must be an array");
    }
    for (const JsonValue& item : enums->arr) {
      RtEnum decl;
      if (!str(item.find("name"), decl.name, "enum name must be a string")) return false;
      const JsonValue* cases = item.find("cases");
      if (cases == nullptr || cases->kind != JsonValue::Kind::Arr) {
        return fail("enum cases must be an array");
      }
      for (const JsonValue& c : cases->arr) {
        if (c.kind != JsonValue::Kind::Str) return fail("case names must be strings");
        decl.cases.push_back(c.str);
      }
      if (decl.cases.empty()) return fail("an error enum needs at least one case");
      decl.qualifiedName = module.name + "::" + decl.name;
      decl.typeHash = fnv1a64(decl.qualifiedName);
      module.enums.push_back(std::move(decl));
    }
    const JsonValue* functions = doc.find("functions");
    if (functions == nullptr || functions->kind != JsonValue::Kind::Arr) {
      return fail("module functions must be an array");
    }
    for (const JsonValue& item : functions->arr) {
      RtFunction fn;
      if (!decodeFunction(item, module, fn)) return false;
      module.functions.push_back(std::move(fn));
    }
    return true;
  }

  bool decodeFunction(const JsonValue& item, const RtModule& module, RtFunction& fn) {
    if (item.kind != JsonValue::Kind::Obj) return fail("function must be an object");
    if (!str(item.find("name"), fn.name, "function name must be a string")) return false;
    const JsonValue* params = item.find("params");
    if (params == nullptr || params->kind != JsonValue::Kind::Arr) {
      return fail("function params must be an array");
    }
    for (const JsonValue& p : params->arr) {
      RtParam param;
      if (!str(p.find("name"), param.name, "param name must be a string")) return false;
      std::string typeName;
      if (!str(p.find("type"), typeName, "param type must be a string")) return false;
      if (!tagForTypeName(typeName, param.tag) || param.tag == kTagUnit) {
        return fail("param type is not a value type");
      }
      fn.params.push_back(std::move(param));
    }
    std::string returnName;
    if (!str(item.find("returns"), returnName, "function returns must be a string")) {
      return false;
    }
    if (!tagForTypeName(returnName, fn.returnTag)) return fail("unknown return type");
    const JsonValue* throws = item.find("throws");
    if (throws == nullptr || throws->kind != JsonValue::Kind::Bool) {
      return fail("function throws must be a boolean");
    }
    fn.throws = throws->boolean;
    const JsonValue* body = item.find("body");
    if (body == nullptr || body->kind != JsonValue::Kind::Arr) {
      return fail("function body must be an array");
    }
    for (const JsonValue& s : body->arr) {
      RtStmt stmt;
      if (!decodeStmt(s, module, fn, stmt)) return false;
      fn.body.push_back(std::move(stmt));
    }
    return true;
  }

  bool decodeStmt(const JsonValue& item, const RtModule& module, const RtFunction& fn,
                  RtStmt& stmt) {
    if (item.kind != JsonValue::Kind::Obj) return fail("statement must be an object");
    std::string kind;
    if (!str(item.find("kind"), kind, "statement kind must be a string")) return false;
    if (kind == "if") {
      stmt.kind = StmtKind::If;
      stmt.expr.reset(new RtExpr());
      const JsonValue* condition = item.find("condition");
      if (condition == nullptr) return fail("if statement lacks a condition");
      if (!decodeExpr(*condition, fn, *stmt.expr)) return false;
      const JsonValue* thenBody = item.find("then");
      const JsonValue* elseBody = item.find("else");
      if (thenBody == nullptr || thenBody->kind != JsonValue::Kind::Arr ||
          elseBody == nullptr || elseBody->kind != JsonValue::Kind::Arr) {
        return fail("if bodies must be arrays");
      }
      for (const JsonValue& s : thenBody->arr) {
        RtStmt child;
        if (!decodeStmt(s, module, fn, child)) return false;
        stmt.thenBody.push_back(std::move(child));
      }
      for (const JsonValue& s : elseBody->arr) {
        RtStmt child;
        if (!decodeStmt(s, module, fn, child)) return false;
        stmt.elseBody.push_back(std::move(child));
      }
      return true;
    }
    if (kind == "return") {
      stmt.kind = StmtKind::Return;
      const JsonValue* value = item.find("value");
      if (value == nullptr) return fail("return statement lacks a value key");
      if (value->kind != JsonValue::Kind::Null) {
        stmt.expr.reset(new RtExpr());
        if (!decodeExpr(*value, fn, *stmt.expr)) return false;
      }
      return true;
    }
    if (kind == "throw") {
      stmt.kind = StmtKind::Throw;
      std::string enumName;
      std::string caseName;
      if (!str(item.find("enum"), enumName, "throw enum must be a string")) return false;
      if (!str(item.find("case"), caseName, "throw case must be a string")) return false;
      for (size_t i = 0; i < module.enums.size(); ++i) {
        if (module.enums[i].name != enumName) continue;
        for (size_t j = 0; j < module.enums[i].cases.size(); ++j) {
          if (module.enums[i].cases[j] == caseName) {
            stmt.enumIndex = i;
            stmt.caseIndex = static_cast<int64_t>(j);
            return true;
          }
        }
        return fail("throw names an unknown case");
      }
      return fail("throw names an unknown enum");
    }
    return fail("unknown statement kind");
  }

  bool decodeExpr(const JsonValue& item, const RtFunction& fn, RtExpr& expr) {
    if (item.kind != JsonValue::Kind::Obj) return fail("expression must be an object");
    std::string kind;
    if (!str(item.find("kind"), kind, "expression kind must be a string")) return false;
    if (kind == "int") {
      const JsonValue* value = item.find("value");
      if (value == nullptr || value->kind != JsonValue::Kind::Int) {
        return fail("int literal must be an integer");
      }
      expr.kind = ExprKind::Int;
      expr.intValue = value->integer;
      return true;
    }
    if (kind == "float") {
      const JsonValue* value = item.find("value");
      if (value == nullptr) return fail("float literal lacks a value");
      if (value->kind == JsonValue::Kind::Double) {
        expr.floatValue = value->number;
      } else if (value->kind == JsonValue::Kind::Int) {
        expr.floatValue = static_cast<double>(value->integer);
      } else {
        return fail("float literal must be a number");
      }
      expr.kind = ExprKind::Float;
      return true;
    }
    if (kind == "bool") {
      const JsonValue* value = item.find("value");
      if (value == nullptr || value->kind != JsonValue::Kind::Bool) {
        return fail("bool literal must be a boolean");
      }
      expr.kind = ExprKind::Bool;
      expr.boolValue = value->boolean;
      return true;
    }
    if (kind == "param") {
      std::string name;
      if (!str(item.find("name"), name, "param reference must name a string")) return false;
      for (size_t i = 0; i < fn.params.size(); ++i) {
        if (fn.params[i].name == name) {
          expr.kind = ExprKind::Param;
          expr.paramIndex = i;
          return true;
        }
      }
      return fail("param reference names an unknown parameter");
    }
    if (kind == "binary") {
      std::string op;
      if (!str(item.find("op"), op, "binary op must be a string")) return false;
      if (!opForName(op, expr.op)) return fail("unknown binary operator");
      const JsonValue* lhs = item.find("lhs");
      const JsonValue* rhs = item.find("rhs");
      if (lhs == nullptr || rhs == nullptr) return fail("binary lacks operands");
      expr.kind = ExprKind::Binary;
      expr.lhs.reset(new RtExpr());
      expr.rhs.reset(new RtExpr());
      return decodeExpr(*lhs, fn, *expr.lhs) && decodeExpr(*rhs, fn, *expr.rhs);
    }
    if (kind == "float_cast") {
      const JsonValue* operand = item.find("operand");
      if (operand == nullptr) return fail("float_cast lacks an operand");
      expr.kind = ExprKind::FloatCast;
      expr.operand.reset(new RtExpr());
      return decodeExpr(*operand, fn, *expr.operand);
    }
    return fail("unknown expression kind");
  }

  static bool opForName(const std::string& name, BinOp& op) {
    if (name == "+") op = BinOp::Add;
    else if (name == "-") op = BinOp::Sub;
    else if (name == "*") op = BinOp::Mul;
    else if (name == "/") op = BinOp::Div;
    else if (name == "==") op = BinOp::Eq;
    else if (name == "!=") op = BinOp::Ne;
    else if (name == "<") op = BinOp::Lt;
    else if (name == "<=") op = BinOp::Le;
    else if (name == ">") op = BinOp::Gt;
    else if (name == ">=") op = BinOp::Ge;
    else if (name == "&&") op = BinOp::And;
    else if (name == "||") op = BinOp::Or;
    else return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// Evaluation. No exceptions: control flow is explicit.
// ---------------------------------------------------------------------------

enum class Flow { Ran, Returned, Threw, Trapped };

struct Control {
  Flow flow = Flow::Ran;
  RtValue value;
  size_t enumIndex = 0;
  int64_t caseIndex = 0;
  std::string trapMessage;
};

int64_t wrapAdd(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) + static_cast<uint64_t>(b));
}

int64_t wrapSub(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) - static_cast<uint64_t>(b));
}

int64_t wrapMul(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b));
}

// Evaluates expr into out; false means a trap described in trapMessage.
bool evalExpr(const RtExpr& expr, const std::vector<RtValue>& env, RtValue& out,
              std::string& trapMessage) {
  switch (expr.kind) {
    case ExprKind::Int:
      out.tag = kTagInt;
      out.i = expr.intValue;
      return true;
    case ExprKind::Float:
      out.tag = kTagFloat;
      out.f = expr.floatValue;
      return true;
    case ExprKind::Bool:
      out.tag = kTagBool;
      out.b = expr.boolValue;
      return true;
    case ExprKind::Param:
      out = env[expr.paramIndex];
      return true;
    case ExprKind::FloatCast: {
      RtValue operand;
      if (!evalExpr(*expr.operand, env, operand, trapMessage)) return false;
      out.tag = kTagFloat;
      out.f = operand.tag == kTagInt ? static_cast<double>(operand.i) : operand.f;
      return true;
    }
    case ExprKind::Binary:
      break;
  }

  if (expr.op == BinOp::And || expr.op == BinOp::Or) {
    RtValue lhs;
    if (!evalExpr(*expr.lhs, env, lhs, trapMessage)) return false;
    if (lhs.tag != kTagBool) {
      trapMessage = "logical operator on a non-Bool operand";
      return false;
    }
    out.tag = kTagBool;
    if (expr.op == BinOp::And && !lhs.b) {
      out.b = false;
      return true;
    }
    if (expr.op == BinOp::Or && lhs.b) {
      out.b = true;
      return true;
    }
    RtValue rhs;
    if (!evalExpr(*expr.rhs, env, rhs, trapMessage)) return false;
    if (rhs.tag != kTagBool) {
      trapMessage = "logical operator on a non-Bool operand";
      return false;
    }
    out.b = rhs.b;
    return true;
  }

  RtValue lhs;
  RtValue rhs;
  if (!evalExpr(*expr.lhs, env, lhs, trapMessage)) return false;
  if (!evalExpr(*expr.rhs, env, rhs, trapMessage)) return false;
  if (lhs.tag != rhs.tag) {
    trapMessage = "binary operator on mismatched operand types";
    return false;
  }
  if ((expr.op != BinOp::Eq && expr.op != BinOp::Ne) && lhs.tag != kTagInt &&
      lhs.tag != kTagFloat) {
    trapMessage = "numeric operator on a non-numeric operand";
    return false;
  }

  switch (expr.op) {
    case BinOp::Eq:
    case BinOp::Ne: {
      bool equal = false;
      if (lhs.tag == kTagInt) equal = lhs.i == rhs.i;
      else if (lhs.tag == kTagFloat) equal = lhs.f == rhs.f;
      else equal = lhs.b == rhs.b;
      out.tag = kTagBool;
      out.b = expr.op == BinOp::Eq ? equal : !equal;
      return true;
    }
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: {
      bool result;
      if (lhs.tag == kTagInt) {
        result = expr.op == BinOp::Lt   ? lhs.i < rhs.i
                 : expr.op == BinOp::Le ? lhs.i <= rhs.i
                 : expr.op == BinOp::Gt ? lhs.i > rhs.i
                                        : lhs.i >= rhs.i;
      } else {
        result = expr.op == BinOp::Lt   ? lhs.f < rhs.f
                 : expr.op == BinOp::Le ? lhs.f <= rhs.f
                 : expr.op == BinOp::Gt ? lhs.f > rhs.f
                                        : lhs.f >= rhs.f;
      }
      out.tag = kTagBool;
      out.b = result;
      return true;
    }
    case BinOp::Add:
    case BinOp::Sub:
    case BinOp::Mul:
    case BinOp::Div:
      break;
    default:
      trapMessage = "unreachable operator";
      return false;
  }

  if (lhs.tag == kTagInt) {
    out.tag = kTagInt;
    switch (expr.op) {
      case BinOp::Add:
        out.i = wrapAdd(lhs.i, rhs.i);
        return true;
      case BinOp::Sub:
        out.i = wrapSub(lhs.i, rhs.i);
        return true;
      case BinOp::Mul:
        out.i = wrapMul(lhs.i, rhs.i);
        return true;
      default:
        if (rhs.i == 0) {
          trapMessage = "integer division by zero";
          return false;
        }
        if (lhs.i == INT64_MIN && rhs.i == -1) {
          out.i = INT64_MIN;  // the wrapped quotient
          return true;
        }
        out.i = lhs.i / rhs.i;  // C++ division truncates toward zero
        return true;
    }
  }

  out.tag = kTagFloat;
  switch (expr.op) {
    case BinOp::Add:
      out.f = lhs.f + rhs.f;
      return true;
    case BinOp::Sub:
      out.f = lhs.f - rhs.f;
      return true;
    case BinOp::Mul:
      out.f = lhs.f * rhs.f;
      return true;
    default:
      out.f = lhs.f / rhs.f;  // IEEE: infinity or NaN on zero divisors
      return true;
  }
}

Control execBlock(const std::vector<RtStmt>& body, const std::vector<RtValue>& env) {
  for (const RtStmt& stmt : body) {
    switch (stmt.kind) {
      case StmtKind::If: {
        RtValue condition;
        Control control;
        if (!evalExpr(*stmt.expr, env, condition, control.trapMessage)) {
          control.flow = Flow::Trapped;
          return control;
        }
        control = execBlock(condition.b ? stmt.thenBody : stmt.elseBody, env);
        if (control.flow != Flow::Ran) return control;
        break;
      }
      case StmtKind::Return: {
        Control control;
        control.flow = Flow::Returned;
        if (stmt.expr != nullptr) {
          if (!evalExpr(*stmt.expr, env, control.value, control.trapMessage)) {
            control.flow = Flow::Trapped;
          }
        } else {
          control.value.tag = kTagUnit;
        }
        return control;
      }
      case StmtKind::Throw: {
        Control control;
        control.flow = Flow::Threw;
        control.enumIndex = stmt.enumIndex;
        control.caseIndex = stmt.caseIndex;
        return control;
      }
    }
  }
  return Control();
}

// ---------------------------------------------------------------------------
// Global runtime state.
// ---------------------------------------------------------------------------

struct Box {
  uint64_t refcount = 1;
  uint64_t typeHash = 0;
  std::string qualifiedName;
  int64_t caseIndex = 0;
  std::string message;
};

std::mutex& stateMutex() {
  static std::mutex mutex;
  return mutex;
}

struct RuntimeState {
  std::vector<std::unique_ptr<RtModule>> modules;
  std::map<std::string, int64_t> idsByName;
  std::map<uint64_t, Box> boxes;
  uint64_t nextHandle = 1;
  uint64_t totalAllocated = 0;
};

RuntimeState& state() {
  static RuntimeState instance;
  return instance;
}

[[noreturn]] void handleTrap(const char* what, uint64_t handle) {
  std::fprintf(stderr, "errbridge runtime trap: %s (handle %" PRIu64 ")\n", what,
               handle);
  std::abort();
}

Box* liveBox(uint64_t handle) {
  auto it = state().boxes.find(handle);
  if (it == state().boxes.end()) return nullptr;
  return &it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// Exported ABI.
// ---------------------------------------------------------------------------

extern "C" int64_t eb_load_module(const unsigned char* bytes, size_t len) {
  if (bytes == nullptr) {
    std::fprintf(stderr, "errbridge: eb_load_module got a null buffer\n");
    return -1;
  }
  JsonValue doc;
  JsonParser parser(reinterpret_cast<const char*>(bytes), len);
  if (!parser.parse(doc)) {
    std::fprintf(stderr, "errbridge: module bytes are not valid JSON: %s\n",
                 parser.error().c_str());
    return -1;
  }
  std::unique_ptr<RtModule> module(new RtModule());
  Decoder decoder;
  if (!decoder.decodeModule(doc, *module)) {
    std::fprintf(stderr, "errbridge: module document rejected: %s\n",
                 decoder.error.c_str());
    return -1;
  }
  module->sourceBytes.assign(bytes, bytes + len);

  std::lock_guard<std::mutex> lock(stateMutex());
  RuntimeState& rt = state();
  auto existing = rt.idsByName.find(module->name);
  if (existing != rt.idsByName.end()) {
    const RtModule& loaded = *rt.modules[static_cast<size_t>(existing->second - 1)];
    if (loaded.sourceBytes == module->sourceBytes) return existing->second;
    std::fprintf(stderr,
                 "errbridge: module '%s' is already loaded with different "
                 "content\n",
                 module->name.c_str());
    return -1;
  }
  rt.modules.push_back(std::move(module));
  int64_t id = static_cast<int64_t>(rt.modules.size());
  rt.idsByName[rt.modules.back()->name] = id;
  return id;
}

extern "C" int32_t eb_invoke(int64_t module_id, int64_t fn_index, const EbValue* args,
                             size_t argc, uint64_t* out_error, EbValue* out_ret) {
  if (out_error == nullptr || out_ret == nullptr) {
    std::fprintf(stderr, "errbridge: eb_invoke needs non-null out pointers\n");
    return 2;
  }
  if (*out_error != 0) {
    std::fprintf(stderr,
                 "errbridge: eb_invoke requires *out_error == 0 at entry\n");
    return 2;
  }

  const RtModule* module = nullptr;
  {
    std::lock_guard<std::mutex> lock(stateMutex());
    RuntimeState& rt = state();
    if (module_id < 1 || static_cast<size_t>(module_id) > rt.modules.size()) {
      std::fprintf(stderr, "errbridge: unknown module id %" PRId64 "\n", module_id);
      return 2;
    }
    module = rt.modules[static_cast<size_t>(module_id - 1)].get();
  }
  if (fn_index < 0 || static_cast<size_t>(fn_index) >= module->functions.size()) {
    std::fprintf(stderr, "errbridge: module '%s' has no function index %" PRId64 "\n",
                 module->name.c_str(), fn_index);
    return 2;
  }
  const RtFunction& fn = module->functions[static_cast<size_t>(fn_index)];
  if (argc != fn.params.size()) {
    std::fprintf(stderr, "errbridge: '%s' takes %zu arguments, got %zu\n",
                 fn.name.c_str(), fn.params.size(), argc);
    return 2;
  }
  std::vector<RtValue> env(argc);
  for (size_t i = 0; i < argc; ++i) {
    if (args[i].tag != fn.params[i].tag) {
      std::fprintf(stderr, "errbridge: '%s' argument %zu has tag %u, expected %u\n",
                   fn.name.c_str(), i, static_cast<unsigned>(args[i].tag),
                   static_cast<unsigned>(fn.params[i].tag));
      return 2;
    }
    env[i].tag = args[i].tag;
    if (args[i].tag == kTagInt) env[i].i = args[i].payload.i64;
    else if (args[i].tag == kTagFloat) env[i].f = args[i].payload.f64;
    else env[i].b = args[i].payload.b != 0;
  }

  Control control = execBlock(fn.body, env);
  if (control.flow == Flow::Ran) {
    if (fn.returnTag == kTagUnit) {
      control.flow = Flow::Returned;
      control.value.tag = kTagUnit;
    } else {
      control.flow = Flow::Trapped;
      control.trapMessage = "function body ended without returning";
    }
  }

  if (control.flow == Flow::Trapped) {
    std::fprintf(stderr, "errbridge runtime trap in '%s': %s\n", fn.name.c_str(),
                 control.trapMessage.c_str());
    return 2;
  }

  if (control.flow == Flow::Threw) {
    const RtEnum& decl = module->enums[control.enumIndex];
    Box box;
    box.refcount = 1;
    box.typeHash = decl.typeHash;
    box.qualifiedName = decl.qualifiedName;
    box.caseIndex = control.caseIndex;
    box.message = decl.cases[static_cast<size_t>(control.caseIndex)];
    std::lock_guard<std::mutex> lock(stateMutex());
    RuntimeState& rt = state();
    uint64_t handle = rt.nextHandle++;
    rt.boxes[handle] = std::move(box);
    rt.totalAllocated += 1;
    *out_error = handle;
    return 1;
  }

  // Returned: widen Int to Float at the boundary when declared so.
  RtValue value = control.value;
  if (fn.returnTag == kTagFloat && value.tag == kTagInt) {
    value.tag = kTagFloat;
    value.f = static_cast<double>(value.i);
  }
  if (value.tag != fn.returnTag) {
    std::fprintf(stderr, "errbridge runtime trap in '%s': return tag mismatch\n",
                 fn.name.c_str());
    return 2;
  }
  out_ret->tag = value.tag;
  if (value.tag == kTagInt) out_ret->payload.i64 = value.i;
  else if (value.tag == kTagFloat) out_ret->payload.f64 = value.f;
  else if (value.tag == kTagBool) out_ret->payload.b = value.b ? 1 : 0;
  else out_ret->payload.i64 = 0;
  return 0;
}

extern "C" uint64_t eb_error_retain(uint64_t handle) {
  if (handle == 0) return 0;
  std::lock_guard<std::mutex> lock(stateMutex());
  Box* box = liveBox(handle);
  if (box == nullptr) handleTrap("retain of a dead or unknown handle", handle);
  box->refcount += 1;
  return handle;
}

extern "C" void eb_error_release(uint64_t handle) {
  if (handle == 0) return;
  std::lock_guard<std::mutex> lock(stateMutex());
  Box* box = liveBox(handle);
  if (box == nullptr) handleTrap("release of a dead or unknown handle", handle);
  box->refcount -= 1;
  if (box->refcount == 0) state().boxes.erase(handle);
}

extern "C" int64_t eb_error_dyncast(uint64_t handle, uint64_t type_hash,
                                    const char* qualified_name) {
  if (handle == 0) return -1;
  std::lock_guard<std::mutex> lock(stateMutex());
  Box* box = liveBox(handle);
  if (box == nullptr) handleTrap("dyncast of a dead or unknown handle", handle);
  if (box->typeHash != type_hash) return -1;
  if (qualified_name == nullptr || box->qualifiedName != qualified_name) return -1;
  return box->caseIndex;
}

extern "C" size_t eb_error_message(uint64_t handle, char* buf, size_t cap) {
  std::lock_guard<std::mutex> lock(stateMutex());
  Box* box = liveBox(handle);
  if (box == nullptr) handleTrap("message read of a dead or unknown handle", handle);
  size_t length = box->message.size();
  size_t writable = length < cap ? length : cap;
  if (writable > 0 && buf != nullptr) {
    std::memcpy(buf, box->message.data(), writable);
  }
  return length;
}

extern "C" uint64_t eb_live_errors(void) {
  std::lock_guard<std::mutex> lock(stateMutex());
  return state().boxes.size();
}
