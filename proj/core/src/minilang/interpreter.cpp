#include "hydra/minilang/interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <variant>

namespace hydra::minilang {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Error: return "error";
  }
  return "?";
}

std::size_t TestRun::failing_count() const {
  std::size_t n = 0;
  for (const auto& r : results) n += r.verdict != Verdict::Pass;
  return n;
}

std::vector<std::string> TestRun::failing_names() const {
  std::vector<std::string> out;
  for (const auto& r : results) {
    if (r.verdict != Verdict::Pass) out.push_back(r.name);
  }
  return out;
}

namespace {

struct RecordObject;
struct ArrayObject;
using RecordRef = std::shared_ptr<RecordObject>;
using ArrayRef = std::shared_ptr<ArrayObject>;
using Value = std::variant<std::monostate, std::int64_t, double, bool, std::string, RecordRef, ArrayRef>;

struct RecordObject {
  std::string type;
  std::vector<std::string> names;
  std::vector<Value> fields;
};

struct ArrayObject {
  std::vector<Value> items;
};

struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AssertionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr int kMaxCallDepth = 2000;

Value default_value(const Type& t) {
  switch (t.tag) {
    case TypeTag::Int:
    case TypeTag::Long: return std::int64_t{0};
    case TypeTag::Float:
    case TypeTag::Double: return 0.0;
    case TypeTag::Bool: return false;
    case TypeTag::String: return std::string();
    case TypeTag::Array: return std::make_shared<ArrayObject>();
    case TypeTag::Record:
    case TypeTag::Null: return RecordRef{};
    default: return std::monostate{};
  }
}

/// Representation change for a value flowing into a slot of type `to`.
Value coerce(Value v, const Type& to) {
  switch (to.tag) {
    case TypeTag::Int:
      if (auto* i = std::get_if<std::int64_t>(&v)) {
        return static_cast<std::int64_t>(static_cast<std::int32_t>(static_cast<std::uint32_t>(*i)));
      }
      return v;
    case TypeTag::Float:
      if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(static_cast<float>(*i));
      if (auto* d = std::get_if<double>(&v)) return static_cast<double>(static_cast<float>(*d));
      return v;
    case TypeTag::Double:
      if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
      return v;
    default:
      return v;
  }
}

double as_double(const Value& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  return std::get<double>(v);
}

std::string unescape(const std::string& lit) {
  std::string out;
  for (std::size_t i = 1; i + 1 < lit.size(); ++i) {
    char c = lit[i];
    if (c == '\\' && i + 2 < lit.size() + 1) {
      char n = lit[++i];
      out += n == 'n' ? '\n' : n == 't' ? '\t' : n;
    } else {
      out += c;
    }
  }
  return out;
}

enum class Flow { Normal, Returned };

class Interpreter {
 public:
  Interpreter(const Program& program, std::int64_t max_steps,
              const std::unordered_set<const Node*>* tracked, std::set<const Node*>* covered)
      : program_(program), max_steps_(max_steps), tracked_(tracked), covered_(covered) {}

  void run_test(const Node& fn) { call(fn, {}); }

 private:
  struct Frame {
    std::vector<std::pair<const std::string*, Value>> vars;
    std::vector<std::size_t> marks;
    Value result;
  };

  void step() {
    if (++steps_ > max_steps_) throw RuntimeError("step budget exhausted");
  }

  Value* lookup(const std::string& name) {
    auto& vars = frames_.back().vars;
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      if (*it->first == name) return &it->second;
    }
    throw RuntimeError("unbound variable " + name);
  }

  Value call(const Node& fn, std::vector<Value> args) {
    step();
    if (static_cast<int>(frames_.size()) >= kMaxCallDepth) throw RuntimeError("call depth exceeded");
    frames_.emplace_back();
    std::size_t i = 0;
    for (const auto& c : fn.children) {
      if (c->kind != NodeKind::Param) continue;
      frames_.back().vars.emplace_back(&c->name, coerce(std::move(args[i++]), c->declared));
    }
    Flow flow = exec_block(*fn.children.back());
    Value result = std::move(frames_.back().result);
    frames_.pop_back();
    if (fn.declared.tag != TypeTag::Void && flow != Flow::Returned) {
      throw RuntimeError("function '" + fn.name + "' ended without returning a value");
    }
    return result;
  }

  Flow exec_block(const Node& block) {
    auto& frame = frames_.back();
    frame.marks.push_back(frame.vars.size());
    Flow flow = Flow::Normal;
    for (const auto& s : block.children) {
      flow = exec(*s);
      if (flow == Flow::Returned) break;
    }
    auto& f = frames_.back();
    f.vars.resize(f.marks.back());
    f.marks.pop_back();
    return flow;
  }

  void mark(const Node& s) {
    if (covered_ != nullptr && tracked_->count(&s) != 0) covered_->insert(&s);
  }

  Flow exec(const Node& s) {
    step();
    mark(s);
    switch (s.kind) {
      case NodeKind::VarDecl: {
        Value v = s.arity() == 1 ? coerce(eval(*s.child(0)), s.declared) : default_value(s.declared);
        frames_.back().vars.emplace_back(&s.name, std::move(v));
        return Flow::Normal;
      }
      case NodeKind::Assign:
        assign(*s.child(0), eval(*s.child(1)));
        return Flow::Normal;
      case NodeKind::If:
        if (truth(eval(*s.child(0)))) return exec_block(*s.child(1));
        if (s.arity() == 3) return exec_block(*s.child(2));
        return Flow::Normal;
      case NodeKind::While:
        while (truth(eval(*s.child(0)))) {
          step();
          if (exec_block(*s.child(1)) == Flow::Returned) return Flow::Returned;
        }
        return Flow::Normal;
      case NodeKind::Return: {
        const Node* fn = s.enclosing_function();
        if (s.arity() == 1) frames_.back().result = coerce(eval(*s.child(0)), fn->declared);
        return Flow::Returned;
      }
      case NodeKind::Assert:
        if (!truth(eval(*s.child(0)))) {
          throw AssertionFailure("assertion failed at line " + std::to_string(s.line));
        }
        return Flow::Normal;
      case NodeKind::ExprStmt:
        eval(*s.child(0));
        return Flow::Normal;
      default:
        throw RuntimeError("bad statement");
    }
  }

  static bool truth(const Value& v) { return std::get<bool>(v); }

  void assign(const Node& target, Value v) {
    switch (target.kind) {
      case NodeKind::VarAccess:
        *lookup(target.name) = coerce(std::move(v), target.type);
        return;
      case NodeKind::FieldAccess: {
        RecordRef rec = record_of(eval(*target.child(0)), target);
        field_slot(*rec, target.name) = coerce(std::move(v), target.type);
        return;
      }
      case NodeKind::ArrayAccess: {
        Value base = eval(*target.child(0));
        auto idx = std::get<std::int64_t>(eval(*target.child(1)));
        auto& arr = std::get<ArrayRef>(base);
        if (idx < 0 || idx >= static_cast<std::int64_t>(arr->items.size())) {
          throw RuntimeError("array index out of bounds");
        }
        arr->items[static_cast<std::size_t>(idx)] = coerce(std::move(v), target.type);
        return;
      }
      default:
        throw RuntimeError("bad assignment target");
    }
  }

  RecordRef record_of(Value v, const Node& at) {
    auto rec = std::get<RecordRef>(std::move(v));
    if (!rec) throw RuntimeError("null dereference of field '" + at.name + "'");
    return rec;
  }

  static Value& field_slot(RecordObject& rec, const std::string& name) {
    for (std::size_t i = 0; i < rec.names.size(); ++i) {
      if (rec.names[i] == name) return rec.fields[i];
    }
    throw RuntimeError("no field " + name);
  }

  Value eval(const Node& e) {
    switch (e.kind) {
      case NodeKind::Literal:
        return literal(e);
      case NodeKind::VarAccess:
        return *lookup(e.name);
      case NodeKind::FieldAccess: {
        RecordRef rec = record_of(eval(*e.child(0)), e);
        return field_slot(*rec, e.name);
      }
      case NodeKind::ArrayAccess: {
        Value base = eval(*e.child(0));
        auto idx = std::get<std::int64_t>(eval(*e.child(1)));
        if (auto* s = std::get_if<std::string>(&base)) {
          (void)s;
          throw RuntimeError("strings are not indexable");
        }
        auto& arr = std::get<ArrayRef>(base);
        if (idx < 0 || idx >= static_cast<std::int64_t>(arr->items.size())) {
          throw RuntimeError("array index out of bounds");
        }
        return arr->items[static_cast<std::size_t>(idx)];
      }
      case NodeKind::ArrayLiteral: {
        auto arr = std::make_shared<ArrayObject>();
        Type elem{e.type.element};
        for (const auto& c : e.children) arr->items.push_back(coerce(eval(*c), elem));
        return arr;
      }
      case NodeKind::Call:
        return eval_call(e);
      case NodeKind::UnaryExpr: {
        Value v = eval(*e.child(0));
        if (e.op == "!") return !std::get<bool>(v);
        if (auto* i = std::get_if<std::int64_t>(&v)) {
          return coerce(static_cast<std::int64_t>(0 - static_cast<std::uint64_t>(*i)), e.type);
        }
        return -std::get<double>(v);
      }
      case NodeKind::BinaryExpr:
        return eval_binary(e);
      default:
        throw RuntimeError("bad expression");
    }
  }

  Value literal(const Node& e) {
    switch (e.type.tag) {
      case TypeTag::Int:
      case TypeTag::Long: {
        std::string digits = e.literal;
        if (!digits.empty() && (digits.back() == 'L' || digits.back() == 'l')) digits.pop_back();
        return coerce(static_cast<std::int64_t>(std::stoll(digits)), e.type);
      }
      case TypeTag::Float:
      case TypeTag::Double: {
        std::string digits = e.literal;
        if (!digits.empty() && (digits.back() == 'f' || digits.back() == 'F')) digits.pop_back();
        return coerce(std::stod(digits), e.type);
      }
      case TypeTag::Bool: return e.literal == "true";
      case TypeTag::String: return unescape(e.literal);
      case TypeTag::Null: return RecordRef{};
      default: throw RuntimeError("bad literal");
    }
  }

  Value eval_call(const Node& e) {
    std::vector<Value> args;
    args.reserve(e.arity());
    for (const auto& c : e.children) args.push_back(eval(*c));
    if (e.name == "len") {
      if (auto* s = std::get_if<std::string>(&args[0])) return static_cast<std::int64_t>(s->size());
      return static_cast<std::int64_t>(std::get<ArrayRef>(args[0])->items.size());
    }
    const auto& records = program_.records();
    if (records.contains(e.name)) {
      step();
      auto rec = std::make_shared<RecordObject>();
      rec->type = e.name;
      auto fields = records.all_fields(e.name);
      for (std::size_t i = 0; i < fields.size(); ++i) {
        rec->names.push_back(fields[i].name);
        rec->fields.push_back(coerce(std::move(args[i]), fields[i].type));
      }
      return rec;
    }
    const Node* fn = program_.function(e.name);
    if (fn == nullptr) throw RuntimeError("unknown function " + e.name);
    return call(*fn, std::move(args));
  }

  Value eval_binary(const Node& e) {
    const std::string& op = e.op;
    if (op == "&&") {
      if (!truth(eval(*e.child(0)))) return false;
      return truth(eval(*e.child(1)));
    }
    if (op == "||") {
      if (truth(eval(*e.child(0)))) return true;
      return truth(eval(*e.child(1)));
    }
    Value l = eval(*e.child(0));
    Value r = eval(*e.child(1));
    if (op == "==" || op == "!=") {
      bool eq = equal(l, r);
      return op == "==" ? eq : !eq;
    }
    if (auto* ls = std::get_if<std::string>(&l)) return *ls + std::get<std::string>(r);

    const Type& lt = e.child(0)->type;
    const Type& rt = e.child(1)->type;
    bool floating = lt.is_floating() || rt.is_floating();
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      int c;
      if (floating) {
        double a = as_double(l), b = as_double(r);
        c = a < b ? -1 : (a > b ? 1 : 0);
        if (std::isnan(a) || std::isnan(b)) return false;
      } else {
        auto a = std::get<std::int64_t>(l), b = std::get<std::int64_t>(r);
        c = a < b ? -1 : (a > b ? 1 : 0);
      }
      if (op == "<") return c < 0;
      if (op == "<=") return c <= 0;
      if (op == ">") return c > 0;
      return c >= 0;
    }
    if (floating) {
      double a = as_double(l), b = as_double(r);
      double v = 0;
      if (op == "+") v = a + b;
      else if (op == "-") v = a - b;
      else if (op == "*") v = a * b;
      else if (op == "/") v = a / b;
      return coerce(v, e.type);
    }
    auto a = static_cast<std::uint64_t>(std::get<std::int64_t>(l));
    auto b = static_cast<std::uint64_t>(std::get<std::int64_t>(r));
    std::int64_t v = 0;
    if (op == "+") v = static_cast<std::int64_t>(a + b);
    else if (op == "-") v = static_cast<std::int64_t>(a - b);
    else if (op == "*") v = static_cast<std::int64_t>(a * b);
    else {
      auto sa = static_cast<std::int64_t>(a), sb = static_cast<std::int64_t>(b);
      if (sb == 0) throw RuntimeError("division by zero");
      if (sb == -1) {
        v = op == "/" ? static_cast<std::int64_t>(0 - a) : 0;
      } else {
        v = op == "/" ? sa / sb : sa % sb;
      }
    }
    return coerce(v, e.type);
  }

  static bool equal(const Value& l, const Value& r) {
    bool ln = std::holds_alternative<std::int64_t>(l) || std::holds_alternative<double>(l);
    bool rn = std::holds_alternative<std::int64_t>(r) || std::holds_alternative<double>(r);
    if (ln && rn) {
      if (std::holds_alternative<std::int64_t>(l) && std::holds_alternative<std::int64_t>(r)) {
        return std::get<std::int64_t>(l) == std::get<std::int64_t>(r);
      }
      return as_double(l) == as_double(r);
    }
    if (auto* a = std::get_if<RecordRef>(&l)) return *a == std::get<RecordRef>(r);
    return l == r;
  }

  const Program& program_;
  std::int64_t max_steps_;
  std::int64_t steps_ = 0;
  const std::unordered_set<const Node*>* tracked_;
  std::set<const Node*>* covered_;
  std::vector<Frame> frames_;
};

}  // namespace

TestRun run_tests(const Program& program, const TestRunOptions& options) {
  TestRun run;
  std::unordered_set<const Node*> tracked;
  for (const Node* s : program.project_statements()) tracked.insert(s);

  for (const Node* test : program.tests()) {
    if (!options.only.empty() &&
        std::find(options.only.begin(), options.only.end(), test->name) == options.only.end()) {
      continue;
    }
    std::set<const Node*> covered;
    Interpreter interp(program, options.max_steps, &tracked,
                       options.with_coverage ? &covered : nullptr);
    TestResult result{test->name, Verdict::Pass, {}};
    try {
      interp.run_test(*test);
    } catch (const AssertionFailure& e) {
      result.verdict = Verdict::Fail;
      result.message = e.what();
    } catch (const RuntimeError& e) {
      result.verdict = Verdict::Error;
      result.message = e.what();
    } catch (const std::bad_variant_access&) {
      result.verdict = Verdict::Error;
      result.message = "ill-typed value";
    }
    if (options.with_coverage) {
      for (const Node* s : covered) {
        auto& counts = run.coverage[program.ref_of(*s)];
        if (result.verdict == Verdict::Pass) {
          ++counts.passing;
        } else {
          ++counts.failing;
        }
      }
    }
    run.results.push_back(std::move(result));
  }
  return run;
}

}  // namespace hydra::minilang
