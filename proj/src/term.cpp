#include "asl/term.hpp"

#include <sstream>
#include <utility>

#include "asl/errors.hpp"

namespace asl {

Rational rational_from_literal(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  auto dot = s.find('.');
  Rational r;
  if (dot == std::string::npos) {
    r = Rational(BigInt(s));
  } else {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    BigInt scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt num = BigInt(whole.empty() ? "0" : whole) * scale + BigInt(frac.empty() ? "0" : frac);
    r = Rational(num, scale);
  }
  return neg ? Rational(-r) : r;
}

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  if (denominator(r) == 1) {
    os << numerator(r);
  } else {
    os << numerator(r) << "/" << denominator(r);
  }
  return os.str();
}

std::string rational_literal(const Rational& r) {
  BigInt den = denominator(r);
  int twos = 0, fives = 0;
  BigInt d = den;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return rational_to_string(r);
  if (den == 1) return rational_to_string(r);
  int places = std::max(twos, fives);
  return render_decimal(r, places);
}

std::string render_decimal(const Rational& r, int places) {
  BigInt scale = 1;
  for (int i = 0; i < places; ++i) scale *= 10;
  Rational scaled = r * Rational(scale);
  BigInt num = numerator(scaled), den = denominator(scaled);
  bool neg = num < 0;
  if (neg) num = -num;
  // round half away from zero
  BigInt q = (2 * num + den) / (2 * den);
  std::ostringstream os;
  if (neg && q != 0) os << '-';
  if (places == 0) {
    os << q;
    return os.str();
  }
  BigInt whole = q / scale, frac = q % scale;
  std::string fs = frac.str();
  os << whole << '.' << std::string(places - fs.size(), '0') << fs;
  return os.str();
}

double rational_to_double(const Rational& r) { return r.convert_to<double>(); }

Term Term::var(std::string name) {
  Term t;
  t.kind_ = TermKind::Variable;
  t.name_ = std::move(name);
  return t;
}

Term Term::number(Rational value) {
  Term t;
  t.kind_ = TermKind::Number;
  t.name_.clear();
  t.value_ = std::move(value);
  return t;
}

Term Term::symbol(std::string name) {
  Term t;
  t.kind_ = TermKind::Symbol;
  t.name_ = std::move(name);
  return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return symbol(std::move(functor));
  Term t;
  t.kind_ = TermKind::Compound;
  t.name_ = std::move(functor);
  t.args_ = std::move(args);
  return t;
}

Term Term::list(const std::vector<Term>& items) { return list(items, nil()); }

Term Term::list(const std::vector<Term>& items, const Term& tail) {
  Term t = tail;
  for (auto it = items.rbegin(); it != items.rend(); ++it) {
    t = compound(".", {*it, t});
  }
  return t;
}

std::optional<std::vector<Term>> Term::as_list() const {
  std::vector<Term> out;
  const Term* cur = this;
  while (true) {
    if (cur->is_nil()) return out;
    if (!cur->is_cons()) return std::nullopt;
    out.push_back(cur->args_[0]);
    cur = &cur->args_[1];
  }
}

bool Term::ground() const {
  switch (kind_) {
    case TermKind::Variable:
      return false;
    case TermKind::Number:
    case TermKind::Symbol:
      return true;
    case TermKind::Compound:
      for (const auto& a : args_)
        if (!a.ground()) return false;
      return true;
  }
  return true;
}

void Term::collect_vars(std::vector<std::string>& out) const {
  if (kind_ == TermKind::Variable) {
    out.push_back(name_);
  } else if (kind_ == TermKind::Compound) {
    for (const auto& a : args_) a.collect_vars(out);
  }
}

bool Term::operator==(const Term& other) const {
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case TermKind::Variable:
    case TermKind::Symbol:
      return name_ == other.name_;
    case TermKind::Number:
      return value_ == other.value_;
    case TermKind::Compound:
      if (name_ != other.name_ || args_.size() != other.args_.size()) return false;
      for (size_t i = 0; i < args_.size(); ++i)
        if (!(args_[i] == other.args_[i])) return false;
      return true;
  }
  return false;
}

namespace {

bool needs_infix(const std::string& f) {
  static const char* ops[] = {"and", "withProb", "=",  "\\=", "@<", "<",
                              ">",   ">=",       "=<", "+",   "-",  "*",
                              "/",   ":-"};
  for (const char* op : ops)
    if (f == op) return true;
  return false;
}

void print_term(const Term& t, std::ostringstream& os) {
  switch (t.kind()) {
    case TermKind::Variable:
      os << t.name();
      return;
    case TermKind::Number:
      os << rational_literal(t.value());
      return;
    case TermKind::Symbol:
      os << t.name();
      return;
    case TermKind::Compound:
      break;
  }
  if (t.is_cons()) {
    auto items = t.as_list();
    if (items) {
      os << '[';
      for (size_t i = 0; i < items->size(); ++i) {
        if (i) os << ',';
        print_term((*items)[i], os);
      }
      os << ']';
      return;
    }
    os << '[';
    const Term* cur = &t;
    bool first = true;
    while (cur->is_cons()) {
      if (!first) os << ',';
      print_term(cur->args()[0], os);
      first = false;
      cur = &cur->args()[1];
    }
    os << '|';
    print_term(*cur, os);
    os << ']';
    return;
  }
  const auto& f = t.name();
  const auto& args = t.args();
  if (f == "~" && args.size() == 1) {
    os << '~';
    bool paren = args[0].is_compound() && needs_infix(args[0].name());
    if (paren) os << '(';
    print_term(args[0], os);
    if (paren) os << ')';
    return;
  }
  if (f == "\\+" && args.size() == 1) {
    os << "\\+ ";
    print_term(args[0], os);
    return;
  }
  if (f == "{}" && args.size() == 1) {
    os << '{';
    print_term(args[0], os);
    os << '}';
    return;
  }
  if (args.size() == 2 && needs_infix(f)) {
    auto wrap = [&](const Term& side) {
      bool paren = side.is_compound() && needs_infix(side.name()) && side.name() != f;
      if (paren) os << '(';
      print_term(side, os);
      if (paren) os << ')';
    };
    wrap(args[0]);
    if (f == "and" || f == "withProb" || f == ":-") {
      os << ' ' << f << ' ';
    } else {
      os << f;
    }
    wrap(args[1]);
    return;
  }
  os << f << '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) os << ',';
    print_term(args[i], os);
  }
  os << ')';
}

}  // namespace

std::string Term::to_string() const {
  std::ostringstream os;
  print_term(*this, os);
  return os.str();
}

std::string indicator(const Term& t) {
  if (t.is_symbol()) return t.name() + "/0";
  if (t.is_compound()) return t.name() + "/" + std::to_string(t.args().size());
  return t.to_string();
}

namespace {

int kind_rank(TermKind k) {
  switch (k) {
    case TermKind::Variable:
      return 0;
    case TermKind::Number:
      return 1;
    case TermKind::Symbol:
      return 2;
    case TermKind::Compound:
      return 3;
  }
  return 3;
}

}  // namespace

int container_compare(const Term& a, const Term& b) {
  int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case TermKind::Variable:
    case TermKind::Symbol:
      return a.name().compare(b.name());
    case TermKind::Number:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case TermKind::Compound: {
      int c = a.name().compare(b.name());
      if (c != 0) return c;
      if (a.args().size() != b.args().size())
        return a.args().size() < b.args().size() ? -1 : 1;
      for (size_t i = 0; i < a.args().size(); ++i) {
        c = container_compare(a.args()[i], b.args()[i]);
        if (c != 0) return c;
      }
      return 0;
    }
  }
  return 0;
}

int standard_order(const Term& a, const Term& b) {
  if (!a.ground() || !b.ground())
    throw NonGroundComparisonError(a.to_string() + " vs " + b.to_string());
  int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case TermKind::Number:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case TermKind::Symbol:
      return a.name().compare(b.name());
    case TermKind::Compound: {
      if (a.args().size() != b.args().size())
        return a.args().size() < b.args().size() ? -1 : 1;
      int c = a.name().compare(b.name());
      if (c != 0) return c;
      for (size_t i = 0; i < a.args().size(); ++i) {
        c = standard_order(a.args()[i], b.args()[i]);
        if (c != 0) return c;
      }
      return 0;
    }
    default:
      return 0;
  }
}

const Term* Subst::lookup(const std::string& var) const {
  auto it = bindings_.find(var);
  return it == bindings_.end() ? nullptr : &it->second;
}

Term Subst::resolve(Term t) const {
  while (t.is_var()) {
    const Term* b = lookup(t.name());
    if (!b) return t;
    t = *b;
  }
  return t;
}

Term Subst::apply(const Term& t) const {
  Term r = resolve(t);
  if (!r.is_compound()) return r;
  std::vector<Term> args;
  args.reserve(r.args().size());
  for (const auto& a : r.args()) args.push_back(apply(a));
  return Term::compound(r.name(), std::move(args));
}

namespace {

bool occurs(const std::string& var, const Term& t, const Subst& s) {
  Term r = s.resolve(t);
  if (r.is_var()) return r.name() == var;
  if (r.is_compound()) {
    for (const auto& a : r.args())
      if (occurs(var, a, s)) return true;
  }
  return false;
}

}  // namespace

bool unify(const Term& a, const Term& b, Subst& s) {
  Term x = s.resolve(a);
  Term y = s.resolve(b);
  if (x.is_var()) {
    if (y.is_var() && y.name() == x.name()) return true;
    if (occurs(x.name(), y, s)) return false;
    s.bind(x.name(), y);
    return true;
  }
  if (y.is_var()) {
    if (occurs(y.name(), x, s)) return false;
    s.bind(y.name(), x);
    return true;
  }
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case TermKind::Number:
      return x.value() == y.value();
    case TermKind::Symbol:
      return x.name() == y.name();
    case TermKind::Compound: {
      if (x.name() != y.name() || x.args().size() != y.args().size()) return false;
      for (size_t i = 0; i < x.args().size(); ++i)
        if (!unify(x.args()[i], y.args()[i], s)) return false;
      return true;
    }
    default:
      return false;
  }
}

}  // namespace asl
