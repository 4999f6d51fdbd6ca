#include "meanforge/meanlang.hpp"

#include "meanforge/format.hpp"
#include "meanforge/invariance.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>

namespace meanforge {

namespace {

constexpr std::array<std::string_view, 16> kReserved = {
    "P", "B", "beta", "T", "S", "M", "mu", "sum", "prod", "powsum", "qa", "mean", "log", "exp", "pow", "id"};

constexpr std::size_t kMaxDepth = 64;

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += i + 1 == items.size() ? " or " : ", ";
    out += items[i];
  }
  return out;
}

std::string describe(ErrorKind kind, std::size_t line, std::size_t column, const std::string& what) {
  std::ostringstream msg;
  msg << to_string(kind) << " error at " << line << ':' << column << ": " << what;
  return msg.str();
}

enum class Tok { Word, Number, Punct, End, Invalid };

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  double number = 0.0;
  std::size_t offset = 0;
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.offset = pos_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      return t;
    }
    const char c = src_[pos_];
    if (is_ident_start(c)) {
      std::size_t end = pos_ + 1;
      while (end < src_.size() && is_ident_char(src_[end])) ++end;
      t.kind = Tok::Word;
      t.text = src_.substr(pos_, end - pos_);
      pos_ = end;
      return t;
    }
    if (is_digit(c) || c == '+' || c == '-' || c == '.') return lex_number();
    if (c == '[' || c == ']' || c == '{' || c == '}' || c == ';' || c == ',' || c == '=') {
      t.kind = Tok::Punct;
      t.text = src_.substr(pos_, 1);
      ++pos_;
      return t;
    }
    t.kind = Tok::Invalid;
    t.text = src_.substr(pos_, 1);
    return t;
  }

private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  Token lex_number() {
    Token t;
    t.offset = pos_;
    std::size_t p = pos_;
    if (src_[p] == '+' || src_[p] == '-') ++p;
    const std::size_t mantissa = p;
    while (p < src_.size() && is_digit(src_[p])) ++p;
    bool digits = p > mantissa;
    if (p < src_.size() && src_[p] == '.') {
      ++p;
      const std::size_t frac = p;
      while (p < src_.size() && is_digit(src_[p])) ++p;
      digits = digits || p > frac;
    }
    if (!digits) {
      t.kind = Tok::Invalid;
      t.text = src_.substr(pos_, std::max<std::size_t>(1, p - pos_));
      return t;
    }
    if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
      std::size_t q = p + 1;
      if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
      const std::size_t exp_digits = q;
      while (q < src_.size() && is_digit(src_[q])) ++q;
      if (q > exp_digits) p = q;
    }
    t.text = src_.substr(pos_, p - pos_);
    pos_ = p;
    // from_chars rejects a leading '+'.
    std::string_view body = t.text;
    if (body.front() == '+') body.remove_prefix(1);
    const auto [end, ec] = std::from_chars(body.data(), body.data() + body.size(), t.number);
    if (ec != std::errc() || end != body.data() + body.size() || !std::isfinite(t.number)) {
      t.kind = Tok::Invalid;
      return t;
    }
    t.kind = Tok::Number;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
public:
  Parser(std::string_view src, const ParseContext& ctx) : src_(src), lexer_(src), ctx_(ctx) { advance(); }

  bool at_problem() const { return cur_.kind == Tok::Word && cur_.text == "T"; }

  MeanExpr mean() {
    DepthGuard guard(*this);
    const Token start = cur_;
    if (is_word("P")) {
      advance();
      expect_punct("[");
      const double order = number();
      expect_punct("]");
      auto m = MeanExpr::power(order);
      admissible(m, start);
      return m;
    }
    if (is_word("B")) {
      advance();
      auto m = MeanExpr::beta();
      admissible(m, start);
      return m;
    }
    if (is_word("beta")) {
      advance();
      expect_punct("{");
      keyword_assign("S");
      MeanExpr s = mean();
      expect_punct(";");
      keyword_assign("mu");
      OuterFn mu = outer();
      expect_punct("}");
      try {
        return beta_generalized(std::move(s), std::move(mu), ctx_.domain, ctx_.solve);
      } catch (const Error& e) {
        fail_at(e.kind(), start, {}, e.what());
      }
    }
    if (cur_.kind == Tok::Word && !is_reserved_word(cur_.text)) {
      const MeanExpr* found = ctx_.registry ? ctx_.registry->find(cur_.text) : nullptr;
      if (!found)
        fail_at(ErrorKind::UnknownIdent, cur_, {}, "unknown mean '" + std::string(cur_.text) + "'");
      advance();
      admissible(*found, start);
      return *found;
    }
    fail({"P", "B", "beta", "identifier"});
  }

  OuterFn outer() {
    DepthGuard guard(*this);
    const Token start = cur_;
    std::optional<OuterFn> f;
    if (is_word("sum")) {
      advance();
      f = OuterFn::sum();
    } else if (is_word("prod")) {
      advance();
      f = OuterFn::product();
    } else if (is_word("powsum")) {
      advance();
      expect_punct("[");
      const Token at = cur_;
      const double p = number();
      expect_punct("]");
      f = build(at, [p] { return OuterFn::power_sum(p); });
    } else if (is_word("qa")) {
      advance();
      expect_punct("[");
      const Generator g = generator();
      expect_punct("]");
      f = OuterFn::quasi_arithmetic(g);
    } else if (is_word("mean")) {
      advance();
      expect_punct("[");
      const Token at = cur_;
      MeanExpr m = mean();
      expect_punct("]");
      f = build(at, [&m] { return OuterFn::strict_mean(m); });
    } else {
      fail({"sum", "prod", "powsum", "qa", "mean"});
    }
    if (f->requires_positive() && !ctx_.domain.is_positive())
      fail_at(ErrorKind::DomainViolation, start, {},
              format(*f) + " needs positive arguments but the domain reaches zero or below");
    return *f;
  }

  std::vector<MeanExpr> list() {
    expect_punct("[");
    std::vector<MeanExpr> out;
    out.push_back(mean());
    while (is_punct(",")) {
      advance();
      out.push_back(mean());
    }
    expect_punct("]");
    return out;
  }

  ProblemSpec problem() {
    const Token start = cur_;
    expect_word("T");
    expect_punct("{");
    keyword_assign("mu");
    OuterFn mu = outer();
    expect_punct(";");
    keyword_assign("S");
    auto small = list();
    expect_punct(";");
    keyword_assign("M");
    auto big = list();
    expect_punct("}");
    if (small.size() >= big.size()) {
      std::ostringstream msg;
      msg << "need |S| < |M|, got |S|=" << small.size() << " and |M|=" << big.size();
      fail_at(ErrorKind::ArityMismatch, start, {}, msg.str());
    }
    return ProblemSpec{std::move(mu), std::move(big), std::move(small), ctx_.domain, std::nullopt};
  }

  void finish() {
    if (cur_.kind != Tok::End) fail({"end of input"});
  }

private:
  struct DepthGuard {
    explicit DepthGuard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) parser.fail_at(ErrorKind::Syntax, parser.cur_, {}, "nesting too deep");
    }
    ~DepthGuard() { --parser.depth_; }
    Parser& parser;
  };

  Generator generator() {
    if (is_word("log")) {
      advance();
      return Generator::log();
    }
    if (is_word("exp")) {
      advance();
      return Generator::exp();
    }
    if (is_word("id")) {
      advance();
      return Generator::identity();
    }
    if (is_word("pow")) {
      advance();
      expect_punct("[");
      const Token at = cur_;
      const double p = number();
      expect_punct("]");
      try {
        return Generator::pow(p);
      } catch (const Error& e) {
        fail_at(ErrorKind::DomainViolation, at, {}, e.what());
      }
    }
    fail({"log", "exp", "pow", "id"});
  }

  template <class F>
  OuterFn build(const Token& at, F&& make) {
    try {
      return make();
    } catch (const Error& e) {
      const auto kind = e.kind() == ErrorKind::NotStrict ? ErrorKind::NotStrict : ErrorKind::DomainViolation;
      fail_at(kind, at, {}, e.what());
    }
  }

  void admissible(const MeanExpr& m, const Token& at) {
    if (m.requires_positive() && !ctx_.domain.is_positive())
      fail_at(ErrorKind::DomainViolation, at, {},
              format(m) + " needs positive arguments but the domain reaches zero or below");
  }

  double number() {
    if (cur_.kind != Tok::Number) fail({"number"});
    const double x = cur_.number;
    advance();
    return x;
  }

  void keyword_assign(std::string_view word) {
    expect_word(word);
    expect_punct("=");
  }

  bool is_word(std::string_view w) const { return cur_.kind == Tok::Word && cur_.text == w; }
  bool is_punct(std::string_view p) const { return cur_.kind == Tok::Punct && cur_.text == p; }

  void expect_word(std::string_view w) {
    if (!is_word(w)) fail({std::string(w)});
    advance();
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail({"'" + std::string(p) + "'"});
    advance();
  }

  void advance() { cur_ = lexer_.next(); }

  std::pair<std::size_t, std::size_t> position(std::size_t offset) const {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string found;
    switch (cur_.kind) {
    case Tok::End: found = "end of input"; break;
    case Tok::Invalid: found = "invalid input"; break;
    default: found = "'" + std::string(cur_.text) + "'"; break;
    }
    const std::string what = "expected " + join(expected) + ", found " + found;
    fail_at(ErrorKind::Syntax, cur_, std::move(expected), what);
  }

  [[noreturn]] void fail_at(ErrorKind kind, const Token& at, std::vector<std::string> expected,
                            const std::string& what) {
    const auto [line, col] = position(at.offset);
    throw ParseError(kind, line, col, std::move(expected), describe(kind, line, col, what));
  }

  std::string_view src_;
  Lexer lexer_;
  const ParseContext& ctx_;
  Token cur_;
  std::size_t depth_ = 0;
};

} // namespace

ParseError::ParseError(ErrorKind kind, std::size_t line, std::size_t column, std::vector<std::string> expected,
                       const std::string& message)
    : Error(kind, message), line_(line), column_(column), expected_(std::move(expected)) {}

bool is_reserved_word(std::string_view text) noexcept {
  return std::find(kReserved.begin(), kReserved.end(), text) != kReserved.end();
}

bool is_identifier(std::string_view text) noexcept {
  if (text.empty() || !is_ident_start(text.front())) return false;
  return std::all_of(text.begin(), text.end(), is_ident_char);
}

void MeanRegistry::define(const std::string& name, const MeanExpr& mean) {
  if (!is_identifier(name) || is_reserved_word(name))
    throw Error(ErrorKind::Syntax, "'" + name + "' is not a usable mean name");
  DerivedMean d;
  d.label = name;
  if (const auto* h = mean.derived_handle()) {
    d.domain = h->domain;
    d.strict = h->strict;
  } else {
    d.strict = true;
  }
  d.min_arity = mean.min_arity();
  d.fixed_arity = mean.fixed_arity();
  d.evaluate = [mean](std::span<const double> x) { return eval_mean(mean, x); };
  means_.insert_or_assign(name, MeanExpr::derived(std::move(d)));
}

const MeanExpr* MeanRegistry::find(std::string_view name) const {
  const auto it = means_.find(name);
  return it == means_.end() ? nullptr : &it->second;
}

std::vector<std::string> MeanRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : means_) out.push_back(name);
  return out;
}

Parsed parse(std::string_view text, const ParseContext& context) {
  Parser p(text, context);
  if (p.at_problem()) {
    auto spec = p.problem();
    p.finish();
    return spec;
  }
  auto m = p.mean();
  p.finish();
  return m;
}

MeanExpr parse_mean(std::string_view text, const ParseContext& context) {
  Parser p(text, context);
  auto m = p.mean();
  p.finish();
  return m;
}

OuterFn parse_outer(std::string_view text, const ParseContext& context) {
  Parser p(text, context);
  auto f = p.outer();
  p.finish();
  return f;
}

std::vector<MeanExpr> parse_mean_list(std::string_view text, const ParseContext& context) {
  Parser p(text, context);
  auto l = p.list();
  p.finish();
  return l;
}

ProblemSpec parse_problem(std::string_view text, const ParseContext& context) {
  Parser p(text, context);
  auto spec = p.problem();
  p.finish();
  return spec;
}

RealVector parse_vector(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    if (!item.empty() && item.front() == '+') item.remove_prefix(1);
    double x = 0.0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (item.empty() || ec != std::errc() || end != item.data() + item.size())
      throw ParseError(ErrorKind::Syntax, 1, start + 1, {"number"},
                       describe(ErrorKind::Syntax, 1, start + 1, "bad vector entry '" + std::string(item) + "'"));
    out.push_back(x);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return RealVector(std::move(out));
}

std::string format(const ProblemSpec& spec) { return format_problem(spec.outer, spec.small, spec.big); }

std::string format(const Parsed& parsed) {
  return std::visit([](const auto& x) { return format(x); }, parsed);
}

void load_session(std::istream& in, MeanRegistry& registry, const ParseContext& context) {
  ParseContext ctx = context;
  ctx.registry = &registry;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(ErrorKind::Syntax, line_no, first + 1, {"'='"},
                       describe(ErrorKind::Syntax, line_no, first + 1, "session line needs NAME = definition"));
    std::string name = line.substr(first, eq - first);
    name.erase(name.find_last_not_of(" \t") + 1);
    std::string_view body(line);
    body.remove_prefix(eq + 1);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);

    try {
      if (body.starts_with("invariant")) {
        body.remove_prefix(std::string_view("invariant").size());
        registry.define(name, invariant_mean(parse_mean_list(body, ctx), ctx.domain));
      } else {
        registry.define(name, parse_mean(body, ctx));
      }
    } catch (const ParseError& e) {
      throw ParseError(e.kind(), line_no, e.column(), e.expected(),
                       "session line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw ParseError(e.kind(), line_no, 1, {}, "session line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string session_definition(const std::string& name, const std::vector<MeanExpr>& invariant_of) {
  return name + " = invariant" + format(invariant_of);
}

} // namespace meanforge
