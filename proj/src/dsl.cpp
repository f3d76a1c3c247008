#include "polc/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>

#include "polc/errors.hpp"

namespace polc::dsl {

bool IntervalBox::operator==(const IntervalBox& o) const { return claim == o.claim && inner == o.inner; }
bool And::operator==(const And& o) const { return args == o.args; }
bool Or::operator==(const Or& o) const { return args == o.args; }
bool Not::operator==(const Not& o) const { return arg == o.arg; }

Formula box_of(const Claim& claim) { return Formula{IntervalBox{claim, {}}}; }

namespace {

constexpr std::string_view kKeywords[] = {
    "prover", "region", "anchor", "event", "claim", "assert", "in", "during", "on", "gap", "samples",
    "proximity", "nontransferable", "polygon", "loc", "cell", "dist", "before", "box", "not", "and", "or", "at",
};

bool is_keyword(std::string_view s) {
  return std::find(std::begin(kKeywords), std::end(kKeywords), s) != std::end(kKeywords);
}

}  // namespace

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  return !is_keyword(s);
}

void validate(const Claim& c) {
  if (c.prover_id.empty()) throw ValidationError("claim has no prover");
  if (!is_identifier(c.prover_id)) throw ValidationError("prover name '" + c.prover_id + "' is not an identifier");
  if (c.region.name.empty() && c.region.polygon.empty()) throw ValidationError("claim has no region");
  if (!c.region.name.empty() && !c.region.polygon.empty())
    throw ValidationError("claim region is either a name or a polygon, not both");
  if (!c.region.name.empty() && !is_identifier(c.region.name))
    throw ValidationError("region name '" + c.region.name + "' is not an identifier");
  if (!c.region.polygon.empty() && c.region.polygon.size() < 3)
    throw ValidationError("inline polygon needs at least 3 vertices");
  for (const auto& p : c.region.polygon)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("polygon has non-finite coordinates");
  if (c.interval_start >= c.interval_end)
    throw ValidationError("empty interval: start " + std::to_string(c.interval_start) +
                          " is not before end " + std::to_string(c.interval_end));
  if (c.max_gap <= 0) throw ValidationError("gap bound must be positive");
  if (c.require_proximity() && c.proximity_m == 0)
    throw ValidationError("proximity requirement needs a positive distance budget");
  if (!c.require_proximity() && c.proximity_m != 0)
    throw ValidationError("distance budget given without the proximity requirement");
  if (c.flags & ~(kRequireProximity | kRequireNontransferability)) throw ValidationError("unknown claim flag");
}

// ---- time ----------------------------------------------------------------------

namespace {

namespace chr = std::chrono;

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

int to_int(std::string_view s) {
  int v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

std::optional<std::int64_t> parse_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' || !all_digits(s.substr(0, 4)) ||
      !all_digits(s.substr(5, 2)) || !all_digits(s.substr(8, 2)))
    return std::nullopt;
  const chr::year_month_day ymd{chr::year{to_int(s.substr(0, 4))},
                                chr::month{static_cast<unsigned>(to_int(s.substr(5, 2)))},
                                chr::day{static_cast<unsigned>(to_int(s.substr(8, 2)))}};
  if (!ymd.ok()) return std::nullopt;
  return chr::sys_seconds{chr::sys_days{ymd}}.time_since_epoch().count();
}

/// HH:MM or HH:MM:SS as seconds after midnight.
std::optional<std::int64_t> parse_clock(std::string_view s) {
  if (s.size() != 5 && s.size() != 8) return std::nullopt;
  if (s[2] != ':' || !all_digits(s.substr(0, 2)) || !all_digits(s.substr(3, 2))) return std::nullopt;
  int sec = 0;
  if (s.size() == 8) {
    if (s[5] != ':' || !all_digits(s.substr(6, 2))) return std::nullopt;
    sec = to_int(s.substr(6, 2));
  }
  const int h = to_int(s.substr(0, 2)), m = to_int(s.substr(3, 2));
  if (h > 23 || m > 59 || sec > 59) return std::nullopt;
  return h * 3600 + m * 60 + sec;
}

std::optional<std::int64_t> try_iso8601(std::string_view s) {
  if (s.size() < 16 || s[10] != 'T') return std::nullopt;
  auto date = parse_date(s.substr(0, 10));
  std::string_view rest = s.substr(11);
  if (!rest.empty() && rest.back() == 'Z') rest.remove_suffix(1);
  auto clock = parse_clock(rest);
  if (!date || !clock) return std::nullopt;
  return *date + *clock;
}

}  // namespace

std::int64_t parse_iso8601(std::string_view text) {
  auto t = try_iso8601(text);
  if (!t) throw FormatError("not an ISO-8601 UTC timestamp: '" + std::string(text) + "'");
  return *t;
}

std::string format_iso8601(std::int64_t t) {
  const chr::sys_seconds tp{chr::seconds{t}};
  const auto day = chr::floor<chr::days>(tp);
  const chr::year_month_day ymd{day};
  const chr::hh_mm_ss hms{tp - day};
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<long long>(hms.hours().count()), static_cast<long long>(hms.minutes().count()),
                static_cast<long long>(hms.seconds().count()));
  return buf;
}

// ---- lexer ---------------------------------------------------------------------

namespace {

enum class Tok { ident, word, sym, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t line = 1, column = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto is_word_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == ':' || c == '.' || c == '-' || c == '+';
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    std::size_t j = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::ident;
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      ++j;
      while (j < src.size() && is_word_char(src[j])) ++j;
      t.kind = Tok::word;
    } else if ((c == '<' || c == '>') && i + 1 < src.size() && src[i + 1] == '=') {
      j += 2;
      t.kind = Tok::sym;
    } else if (std::string_view("()[]{},=").find(c) != std::string_view::npos) {
      ++j;
      t.kind = Tok::sym;
    } else {
      throw SyntaxError(line, col, "a token", "'" + std::string(1, c) + "'");
    }
    t.text = std::string(src.substr(i, j - i));
    advance(j - i);
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

// ---- parser --------------------------------------------------------------------

/// Time literal as written; clock times are resolved against an `on` date.
struct TimeLit {
  std::int64_t value = 0;
  bool clock_only = false;
};

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& options) : toks_(lex(src)), options_(options) {}

  Program program() {
    Program p;
    while (peek().kind != Tok::end) statement(p);
    return p;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw SyntaxError(peek().line, peek().column, expected, describe(peek()));
  }
  bool at_sym(std::string_view s) const { return peek().kind == Tok::sym && peek().text == s; }
  bool at_kw(std::string_view s) const { return peek().kind == Tok::ident && peek().text == s; }
  void expect_sym(std::string_view s) {
    if (!at_sym(s)) fail("'" + std::string(s) + "'");
    next();
  }
  void expect_kw(std::string_view s) {
    if (!at_kw(s)) fail("'" + std::string(s) + "'");
    next();
  }
  std::string ident(const std::string& what) {
    if (peek().kind != Tok::ident || is_keyword(peek().text)) fail(what);
    return next().text;
  }

  std::int64_t integer(const std::string& what) {
    if (peek().kind != Tok::word) fail(what);
    const std::string& s = peek().text;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) fail(what);
    next();
    return v;
  }

  double number(const std::string& what) {
    if (peek().kind != Tok::word) fail(what);
    const std::string& s = peek().text;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) fail(what);
    next();
    return v;
  }

  /// Unsigned integer followed by one of `units` (name, multiplier).
  std::uint64_t quantity(const std::string& what,
                         std::initializer_list<std::pair<std::string_view, std::uint64_t>> units) {
    if (peek().kind != Tok::word) fail(what);
    const std::string& s = peek().text;
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr == s.data()) fail(what);
    const std::string_view unit(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr));
    for (const auto& [name, mult] : units)
      if (unit == name) {
        next();
        return v * mult;
      }
    fail(what);
  }

  grid::Point point() {
    expect_sym("(");
    const double x = number("x coordinate");
    expect_sym(",");
    const double y = number("y coordinate");
    expect_sym(")");
    return {x, y};
  }

  grid::Ring polygon() {
    expect_kw("polygon");
    expect_sym("[");
    grid::Ring ring;
    ring.push_back(point());
    while (at_sym(",")) {
      next();
      ring.push_back(point());
    }
    expect_sym("]");
    if (ring.size() < 3) throw ValidationError("polygon needs at least 3 vertices");
    return ring;
  }

  TimeLit time_literal() {
    if (peek().kind != Tok::word) fail("a timestamp");
    const std::string& s = peek().text;
    if (auto t = try_iso8601(s)) {
      next();
      return {*t, false};
    }
    if (auto t = parse_clock(s)) {
      next();
      return {*t, true};
    }
    fail("a timestamp (YYYY-MM-DDTHH:MM[:SS]Z or HH:MM[:SS])");
  }

  std::int64_t absolute_time() {
    const Token& tok = peek();
    TimeLit t = time_literal();
    if (t.clock_only) throw SyntaxError(tok.line, tok.column, "a full ISO-8601 timestamp", describe(tok));
    return t.value;
  }

  void declare_region_use(const std::string& name, const Program& p, const Token& at) {
    (void)at;
    if (p.regions.count(name)) return;
    if (options_.known_regions && !options_.known_regions->count(name))
      throw UnknownRegionError("unknown region '" + name + "'");
  }

  /// "<prover> in <region> during [t1, t2] [on DATE] options"
  Claim claim_body(const Program& p) {
    Claim c;
    c.prover_id = ident("a prover name");
    expect_kw("in");
    if (at_kw("polygon")) {
      c.region.polygon = polygon();
    } else {
      const Token& tok = peek();
      c.region.name = ident("a region name or polygon");
      declare_region_use(c.region.name, p, tok);
    }
    expect_kw("during");
    expect_sym("[");
    const Token& t1_tok = peek();
    TimeLit t1 = time_literal();
    expect_sym(",");
    TimeLit t2 = time_literal();
    expect_sym("]");
    if (at_kw("on")) {
      next();
      if (peek().kind != Tok::word) fail("a date YYYY-MM-DD");
      auto date = parse_date(peek().text);
      if (!date) fail("a date YYYY-MM-DD");
      next();
      if (!t1.clock_only || !t2.clock_only)
        throw SyntaxError(t1_tok.line, t1_tok.column, "clock times HH:MM with 'on DATE'", "full timestamps");
      t1.value += *date;
      t2.value += *date;
    } else if (t1.clock_only || t2.clock_only) {
      throw SyntaxError(t1_tok.line, t1_tok.column, "'on DATE' after clock-time interval", describe(peek()));
    }
    c.interval_start = t1.value;
    c.interval_end = t2.value;
    claim_options(c);
    validate(c);
    return c;
  }

  void claim_options(Claim& c) {
    for (;;) {
      if (at_kw("gap")) {
        next();
        expect_sym("<=");
        c.max_gap = static_cast<std::int64_t>(quantity("a duration like 60s", {{"s", 1}, {"min", 60}, {"h", 3600}}));
      } else if (at_kw("samples")) {
        next();
        expect_sym(">=");
        const std::int64_t n = integer("a sample count");
        if (n < 0) throw ValidationError("sample count must be non-negative");
        c.min_samples = static_cast<std::uint64_t>(n);
      } else if (at_kw("proximity")) {
        next();
        expect_sym("<=");
        c.proximity_m = quantity("a distance like 10m", {{"m", 1}, {"km", 1000}});
        c.flags |= kRequireProximity;
      } else if (at_kw("nontransferable")) {
        next();
        c.flags |= kRequireNontransferability;
      } else {
        return;
      }
    }
  }

  void statement(Program& p) {
    const Token& kw = peek();
    if (kw.kind != Tok::ident) fail("a statement keyword");
    const std::string word = next().text;
    if (word == "prover") {
      std::string name = ident("a prover name");
      if (std::find(p.provers.begin(), p.provers.end(), name) == p.provers.end()) p.provers.push_back(name);
    } else if (word == "region") {
      std::string name = ident("a region name");
      expect_sym("=");
      p.regions[name] = polygon();
    } else if (word == "anchor") {
      std::string name = ident("an anchor name");
      expect_sym("=");
      p.anchors[name] = point();
    } else if (word == "event") {
      std::string name = ident("an event name");
      expect_kw("at");
      p.events[name] = absolute_time();
    } else if (word == "claim") {
      if (p.claim) throw SyntaxError(kw.line, kw.column, "a single claim statement", "a second claim");
      p.claim = claim_body(p);
    } else if (word == "assert") {
      if (p.formula) throw SyntaxError(kw.line, kw.column, "a single assert statement", "a second assert");
      p.formula = formula(p);
    } else {
      throw SyntaxError(kw.line, kw.column, "prover, region, anchor, event, claim or assert", describe(kw));
    }
  }

  // formula := conj ("or" conj)*
  Formula formula(const Program& p) {
    Formula f = conjunction(p);
    if (!at_kw("or")) return f;
    Or node{{std::move(f)}};
    while (at_kw("or")) {
      next();
      node.args.push_back(conjunction(p));
    }
    return Formula{std::move(node)};
  }

  Formula conjunction(const Program& p) {
    Formula f = unary(p);
    if (!at_kw("and")) return f;
    And node{{std::move(f)}};
    while (at_kw("and")) {
      next();
      node.args.push_back(unary(p));
    }
    return Formula{std::move(node)};
  }

  Formula unary(const Program& p) {
    if (at_kw("not")) {
      next();
      return Formula{Not{{unary(p)}}};
    }
    if (at_sym("(")) {
      next();
      Formula f = formula(p);
      expect_sym(")");
      return f;
    }
    return atom(p);
  }

  void require_bound(const std::string& name, bool bound, const char* what) {
    if (!bound) throw UnboundIdentifierError(std::string(what) + " '" + name + "' is not declared");
  }
  bool prover_declared(const Program& p, const std::string& name) const {
    return std::find(p.provers.begin(), p.provers.end(), name) != p.provers.end();
  }

  std::optional<std::int64_t> optional_time() {
    if (!at_sym(",")) return std::nullopt;
    next();
    return absolute_time();
  }

  Formula atom(const Program& p) {
    if (at_kw("loc")) {
      next();
      expect_sym("(");
      LocAtom a;
      a.prover = ident("a prover name");
      require_bound(a.prover, prover_declared(p, a.prover), "prover");
      expect_sym(",");
      if (at_kw("cell")) {
        next();
        expect_sym("(");
        grid::CellId cell;
        cell.q = integer("q");
        expect_sym(",");
        cell.r = integer("r");
        cell.resolution = grid::kDefaultResolution;
        if (at_sym(",")) {
          next();
          cell.resolution = static_cast<int>(integer("resolution"));
        }
        expect_sym(")");
        a.where.cell = cell;
      } else {
        const Token& tok = peek();
        a.where.region = ident("cell(q, r) or a region name");
        declare_region_use(a.where.region, p, tok);
      }
      a.at = optional_time();
      expect_sym(")");
      return Formula{std::move(a)};
    }
    if (at_kw("dist")) {
      next();
      expect_sym("(");
      DistAtom a;
      a.prover = ident("a prover name");
      require_bound(a.prover, prover_declared(p, a.prover), "prover");
      expect_sym(",");
      a.anchor = ident("an anchor name");
      require_bound(a.anchor, p.anchors.count(a.anchor) > 0, "anchor");
      a.at = optional_time();
      expect_sym(")");
      expect_sym("<=");
      a.bound_m = quantity("a distance like 10m", {{"m", 1}, {"km", 1000}});
      return Formula{std::move(a)};
    }
    if (at_kw("before")) {
      next();
      expect_sym("(");
      TimeOrder t;
      t.first = ident("an event name");
      require_bound(t.first, p.events.count(t.first) > 0, "event");
      expect_sym(",");
      t.second = ident("an event name");
      require_bound(t.second, p.events.count(t.second) > 0, "event");
      expect_sym(")");
      return Formula{std::move(t)};
    }
    if (at_kw("box")) {
      next();
      IntervalBox b;
      b.claim = claim_body(p);
      require_bound(b.claim.prover_id, prover_declared(p, b.claim.prover_id), "prover");
      if (at_sym("{")) {
        next();
        b.inner.push_back(formula(p));
        expect_sym("}");
      }
      return Formula{std::move(b)};
    }
    fail("loc, dist, before, box, not or '('");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions options_;
};

}  // namespace

Program parse_program(std::string_view source, const ParseOptions& options) {
  return Parser(source, options).program();
}

Claim parse_claim(std::string_view source, const ParseOptions& options) {
  Program p = parse_program(source, options);
  if (!p.claim) throw SyntaxError(1, 1, "a claim statement", "none");
  return *p.claim;
}

// ---- pretty printing -------------------------------------------------------------

namespace {

std::string fmt_number(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt_point(const grid::Point& p) { return "(" + fmt_number(p.x) + ", " + fmt_number(p.y) + ")"; }

std::string fmt_polygon(const grid::Ring& ring) {
  std::string s = "polygon[";
  for (std::size_t i = 0; i < ring.size(); ++i) {
    if (i) s += ", ";
    s += fmt_point(ring[i]);
  }
  return s + "]";
}

std::string claim_body_text(const Claim& c) {
  std::string s = c.prover_id + " in " + (c.region.polygon.empty() ? c.region.name : fmt_polygon(c.region.polygon));
  s += " during [" + format_iso8601(c.interval_start) + ", " + format_iso8601(c.interval_end) + "]";
  s += " gap<=" + std::to_string(c.max_gap) + "s";
  s += " samples>=" + std::to_string(c.min_samples);
  if (c.require_proximity()) s += " proximity<=" + std::to_string(c.proximity_m) + "m";
  if (c.require_nontransferability()) s += " nontransferable";
  return s;
}

enum Prec { kOr = 0, kAnd = 1, kUnary = 2 };

std::string formula_text(const Formula& f, int ctx);

std::string join(const std::vector<Formula>& args, std::string_view op, int prec) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += op;
    s += formula_text(args[i], prec + 1);
  }
  return s;
}

std::string formula_text(const Formula& f, int ctx) {
  auto paren = [ctx](int prec, std::string s) { return prec < ctx ? "(" + s + ")" : s; };
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LocAtom>) {
          std::string s = "loc(" + n.prover + ", ";
          if (n.where.cell)
            s += "cell(" + std::to_string(n.where.cell->q) + ", " + std::to_string(n.where.cell->r) + ", " +
                 std::to_string(n.where.cell->resolution) + ")";
          else
            s += n.where.region;
          if (n.at) s += ", " + format_iso8601(*n.at);
          return s + ")";
        } else if constexpr (std::is_same_v<T, DistAtom>) {
          std::string s = "dist(" + n.prover + ", " + n.anchor;
          if (n.at) s += ", " + format_iso8601(*n.at);
          return s + ") <= " + std::to_string(n.bound_m) + "m";
        } else if constexpr (std::is_same_v<T, TimeOrder>) {
          return "before(" + n.first + ", " + n.second + ")";
        } else if constexpr (std::is_same_v<T, IntervalBox>) {
          std::string s = "box " + claim_body_text(n.claim);
          if (!n.inner.empty()) s += " { " + formula_text(n.inner.front(), kOr) + " }";
          return paren(kUnary, s);
        } else if constexpr (std::is_same_v<T, And>) {
          return paren(kAnd, join(n.args, " and ", kAnd));
        } else if constexpr (std::is_same_v<T, Or>) {
          return paren(kOr, join(n.args, " or ", kOr));
        } else {
          return "not " + formula_text(n.arg.front(), kUnary + 1);
        }
      },
      f.node);
}

}  // namespace

std::string pretty_print(const Claim& claim) { return "claim " + claim_body_text(claim) + "\n"; }

std::string pretty_print(const Formula& formula) { return formula_text(formula, kOr); }

std::string pretty_print(const Program& p) {
  std::string s;
  for (const auto& name : p.provers) s += "prover " + name + "\n";
  for (const auto& [name, ring] : p.regions) s += "region " + name + " = " + fmt_polygon(ring) + "\n";
  for (const auto& [name, pt] : p.anchors) s += "anchor " + name + " = " + fmt_point(pt) + "\n";
  for (const auto& [name, t] : p.events) s += "event " + name + " at " + format_iso8601(t) + "\n";
  if (p.claim) s += pretty_print(*p.claim);
  if (p.formula) s += "assert " + pretty_print(*p.formula) + "\n";
  return s;
}

// ---- canonical bytes --------------------------------------------------------------

namespace {
constexpr std::string_view kClaimMagic = "POLC-CLAIM/1";
}

Bytes canonical_serialize(const Claim& c) {
  ByteWriter w;
  w.str(kClaimMagic);
  w.str(c.prover_id);
  if (c.region.polygon.empty()) {
    w.u8(0);
    w.str(c.region.name);
  } else {
    w.u8(1);
    w.u32(static_cast<std::uint32_t>(c.region.polygon.size()));
    for (const auto& p : c.region.polygon) {
      w.f64(p.x);
      w.f64(p.y);
    }
  }
  w.i64(c.interval_start);
  w.i64(c.interval_end);
  w.u64(c.min_samples);
  w.i64(c.max_gap);
  w.u8(c.flags);
  w.u64(c.proximity_m);
  return std::move(w).bytes();
}

Claim canonical_deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.str() != kClaimMagic) throw FormatError("not a canonical claim encoding");
  Claim c;
  c.prover_id = r.str();
  const std::uint8_t kind = r.u8();
  if (kind == 0) {
    c.region.name = r.str();
  } else if (kind == 1) {
    const std::uint32_t n = r.u32();
    if (n > r.remaining() / 16) throw FormatError("polygon length exceeds input");
    for (std::uint32_t i = 0; i < n; ++i) {
      const double x = r.f64();
      const double y = r.f64();
      c.region.polygon.push_back({x, y});
    }
  } else {
    throw FormatError("bad region kind");
  }
  c.interval_start = r.i64();
  c.interval_end = r.i64();
  c.min_samples = r.u64();
  c.max_gap = r.i64();
  c.flags = r.u8();
  c.proximity_m = r.u64();
  if (!r.done()) throw FormatError("trailing bytes after claim");
  return c;
}

// ---- JSON ----------------------------------------------------------------------

namespace {

using ojson = nlohmann::ordered_json;

ojson ring_json(const grid::Ring& ring) {
  ojson a = ojson::array();
  for (const auto& p : ring) a.push_back({p.x, p.y});
  return a;
}

grid::Ring ring_from(const nlohmann::json& j) {
  grid::Ring ring;
  for (const auto& v : j) ring.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  return ring;
}

template <class Fn>
auto json_guard(Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("claim JSON: ") + e.what());
  }
}

}  // namespace

ojson to_json(const Claim& c) {
  ojson j;
  j["prover"] = c.prover_id;
  if (c.region.polygon.empty())
    j["region"] = {{"name", c.region.name}};
  else
    j["region"] = {{"polygon", ring_json(c.region.polygon)}};
  j["interval"] = {c.interval_start, c.interval_end};
  j["min_samples"] = c.min_samples;
  j["max_gap_s"] = c.max_gap;
  ojson flags = ojson::array();
  if (c.require_proximity()) flags.push_back("require_proximity");
  if (c.require_nontransferability()) flags.push_back("require_nontransferability");
  j["flags"] = flags;
  j["proximity_m"] = c.proximity_m;
  return j;
}

Claim claim_from_json(const nlohmann::json& j) {
  return json_guard([&] {
    Claim c;
    c.prover_id = j.at("prover").get<std::string>();
    const auto& region = j.at("region");
    if (region.contains("polygon"))
      c.region.polygon = ring_from(region.at("polygon"));
    else
      c.region.name = region.at("name").get<std::string>();
    c.interval_start = j.at("interval").at(0).get<std::int64_t>();
    c.interval_end = j.at("interval").at(1).get<std::int64_t>();
    c.min_samples = j.value("min_samples", std::uint64_t{1});
    c.max_gap = j.value("max_gap_s", std::int64_t{60});
    for (const auto& f : j.value("flags", nlohmann::json::array())) {
      const auto name = f.get<std::string>();
      if (name == "require_proximity")
        c.flags |= kRequireProximity;
      else if (name == "require_nontransferability")
        c.flags |= kRequireNontransferability;
      else
        throw FormatError("unknown claim flag '" + name + "'");
    }
    c.proximity_m = j.value("proximity_m", std::uint64_t{0});
    validate(c);
    return c;
  });
}

ojson to_json(const Formula& f) {
  return std::visit(
      [](const auto& n) -> ojson {
        using T = std::decay_t<decltype(n)>;
        ojson j;
        if constexpr (std::is_same_v<T, LocAtom>) {
          j["op"] = "loc";
          j["prover"] = n.prover;
          if (n.where.cell)
            j["cell"] = {n.where.cell->q, n.where.cell->r, n.where.cell->resolution};
          else
            j["region"] = n.where.region;
          if (n.at) j["at"] = *n.at;
        } else if constexpr (std::is_same_v<T, DistAtom>) {
          j["op"] = "dist";
          j["prover"] = n.prover;
          j["anchor"] = n.anchor;
          j["bound_m"] = n.bound_m;
          if (n.at) j["at"] = *n.at;
        } else if constexpr (std::is_same_v<T, TimeOrder>) {
          j["op"] = "before";
          j["first"] = n.first;
          j["second"] = n.second;
        } else if constexpr (std::is_same_v<T, IntervalBox>) {
          j["op"] = "box";
          j["claim"] = to_json(n.claim);
          if (!n.inner.empty()) j["inner"] = to_json(n.inner.front());
        } else {
          j["op"] = std::is_same_v<T, And> ? "and" : std::is_same_v<T, Or> ? "or" : "not";
          ojson args = ojson::array();
          if constexpr (std::is_same_v<T, Not>)
            args.push_back(to_json(n.arg.front()));
          else
            for (const auto& a : n.args) args.push_back(to_json(a));
          j["args"] = args;
        }
        return j;
      },
      f.node);
}

Formula formula_from_json(const nlohmann::json& j) {
  return json_guard([&]() -> Formula {
    const auto op = j.at("op").get<std::string>();
    auto at = [&]() -> std::optional<std::int64_t> {
      if (!j.contains("at")) return std::nullopt;
      return j.at("at").get<std::int64_t>();
    };
    if (op == "loc") {
      LocAtom a;
      a.prover = j.at("prover").get<std::string>();
      if (j.contains("cell")) {
        const auto& c = j.at("cell");
        a.where.cell = grid::CellId{c.at(0).get<std::int64_t>(), c.at(1).get<std::int64_t>(), c.at(2).get<int>()};
      } else {
        a.where.region = j.at("region").get<std::string>();
      }
      a.at = at();
      return Formula{a};
    }
    if (op == "dist") {
      DistAtom a{j.at("prover").get<std::string>(), j.at("anchor").get<std::string>(),
                 j.at("bound_m").get<std::uint64_t>(), at()};
      return Formula{a};
    }
    if (op == "before") return Formula{TimeOrder{j.at("first").get<std::string>(), j.at("second").get<std::string>()}};
    if (op == "box") {
      IntervalBox b{claim_from_json(j.at("claim")), {}};
      if (j.contains("inner")) b.inner.push_back(formula_from_json(j.at("inner")));
      return Formula{b};
    }
    std::vector<Formula> args;
    for (const auto& a : j.at("args")) args.push_back(formula_from_json(a));
    if (op == "and") return Formula{And{std::move(args)}};
    if (op == "or") return Formula{Or{std::move(args)}};
    if (op == "not" && args.size() == 1) return Formula{Not{std::move(args)}};
    throw FormatError("unknown formula op '" + op + "'");
  });
}

ojson to_json(const Program& p) {
  ojson j;
  j["provers"] = p.provers;
  ojson regions = ojson::object();
  for (const auto& [name, ring] : p.regions) regions[name] = ring_json(ring);
  j["regions"] = regions;
  ojson anchors = ojson::object();
  for (const auto& [name, pt] : p.anchors) anchors[name] = {pt.x, pt.y};
  j["anchors"] = anchors;
  ojson events = ojson::object();
  for (const auto& [name, t] : p.events) events[name] = t;
  j["events"] = events;
  if (p.claim) j["claim"] = to_json(*p.claim);
  if (p.formula) j["formula"] = to_json(*p.formula);
  return j;
}

Program program_from_json(const nlohmann::json& j) {
  return json_guard([&] {
    Program p;
    if (j.contains("provers")) p.provers = j.at("provers").get<std::vector<std::string>>();
    if (j.contains("regions"))
      for (const auto& [name, ring] : j.at("regions").items()) p.regions[name] = ring_from(ring);
    if (j.contains("anchors"))
      for (const auto& [name, pt] : j.at("anchors").items())
        p.anchors[name] = {pt.at(0).get<double>(), pt.at(1).get<double>()};
    if (j.contains("events"))
      for (const auto& [name, t] : j.at("events").items()) p.events[name] = t.get<std::int64_t>();
    if (j.contains("claim")) p.claim = claim_from_json(j.at("claim"));
    if (j.contains("formula")) p.formula = formula_from_json(j.at("formula"));
    return p;
  });
}

}  // namespace polc::dsl
