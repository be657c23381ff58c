#include "fracq/weyl_algebra.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "fracq/error.hpp"

namespace fracq {

namespace {

template <class Map>
void prune(Map& m) {
  std::erase_if(m, [](const auto& kv) { return kv.second == cplx(0.0, 0.0); });
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  PhasePolynomial parse() {
    skip_ws();
    require(pos_ < s_.size(), ErrorCode::invalid_argument, "empty polynomial expression");
    PhasePolynomial acc;
    bool first = true;
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) break;
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        error("expected '+' or '-'");
      }
      acc = acc + term() * sign;
      first = false;
    }
    return acc;
  }

 private:
  PhasePolynomial term() {
    cplx c = 1.0;
    int n = 0;
    int m = 0;
    bool any = false;
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) break;
      const char ch = peek();
      if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
        c *= number();
      } else if (ch == 'q' || ch == 'p') {
        ++pos_;
        int e = 1;
        skip_ws();
        if (pos_ < s_.size() && peek() == '^') {
          ++pos_;
          skip_ws();
          e = integer();
        }
        (ch == 'q' ? n : m) += e;
      } else if (ch == 'i') {
        ++pos_;
        c *= cplx(0.0, 1.0);
      } else {
        error(std::string("unexpected character '") + ch + "'");
      }
      any = true;
      skip_ws();
      if (pos_ < s_.size() && peek() == '*') {
        ++pos_;
        continue;
      }
      // Juxtaposition such as "3q" or "q p" also multiplies.
      if (pos_ < s_.size() && peek() != '+' && peek() != '-') continue;
      break;
    }
    if (!any) error("missing term");
    return PhasePolynomial::monomial(n, m, c);
  }

  double number() {
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc()) error("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  int integer() {
    const char* begin = s_.data() + pos_;
    const char* end = s_.data() + s_.size();
    int v = 0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || v < 0) error("exponent must be a non-negative integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::invalid_argument,
         "polynomial parse error at position " + std::to_string(pos_) + ": " + what);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

PhasePolynomial::PhasePolynomial(std::map<Key, cplx> terms) : terms_(std::move(terms)) {
  for (const auto& [k, c] : terms_) {
    require(k.first >= 0 && k.second >= 0, ErrorCode::invalid_argument,
            "phase polynomial exponents must be >= 0");
    require(std::isfinite(c.real()) && std::isfinite(c.imag()), ErrorCode::invalid_argument,
            "phase polynomial coefficients must be finite");
  }
  prune(terms_);
}

PhasePolynomial PhasePolynomial::monomial(int n, int m, cplx c) {
  return PhasePolynomial(std::map<Key, cplx>{{Key{n, m}, c}});
}

PhasePolynomial PhasePolynomial::parse(std::string_view text) { return Parser(text).parse(); }

int PhasePolynomial::degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.first + k.second);
  return d;
}

cplx PhasePolynomial::evaluate(double q, double p) const {
  cplx acc = 0.0;
  for (const auto& [k, c] : terms_) acc += c * std::pow(q, k.first) * std::pow(p, k.second);
  return acc;
}

bool PhasePolynomial::is_real() const {
  for (const auto& [k, c] : terms_) {
    if (c.imag() != 0.0) return false;
  }
  return true;
}

PhasePolynomial PhasePolynomial::d_dq() const {
  std::map<Key, cplx> out;
  for (const auto& [k, c] : terms_) {
    if (k.first > 0) out[{k.first - 1, k.second}] += c * static_cast<double>(k.first);
  }
  return PhasePolynomial(std::move(out));
}

PhasePolynomial PhasePolynomial::d_dp() const {
  std::map<Key, cplx> out;
  for (const auto& [k, c] : terms_) {
    if (k.second > 0) out[{k.first, k.second - 1}] += c * static_cast<double>(k.second);
  }
  return PhasePolynomial(std::move(out));
}

PhasePolynomial PhasePolynomial::operator+(const PhasePolynomial& o) const {
  std::map<Key, cplx> out = terms_;
  for (const auto& [k, c] : o.terms_) out[k] += c;
  return PhasePolynomial(std::move(out));
}

PhasePolynomial PhasePolynomial::operator*(cplx s) const {
  std::map<Key, cplx> out = terms_;
  for (auto& [k, c] : out) c *= s;
  return PhasePolynomial(std::move(out));
}

std::string PhasePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c.real();
    if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << 'i';
    os << ')';
    if (k.first > 0) os << "*q^" << k.first;
    if (k.second > 0) os << "*p^" << k.second;
  }
  return os.str();
}

OrderedPolynomial::OrderedPolynomial(double hbar, std::map<Key, cplx> terms)
    : hbar_(hbar), terms_(std::move(terms)) {
  require(std::isfinite(hbar) && hbar > 0.0, ErrorCode::invalid_argument, "hbar must be > 0");
  prune(terms_);
}

OrderedPolynomial OrderedPolynomial::operator+(const OrderedPolynomial& o) const {
  std::map<Key, cplx> out = terms_;
  for (const auto& [k, c] : o.terms_) out[k] += c;
  return OrderedPolynomial(hbar_, std::move(out));
}

OrderedPolynomial OrderedPolynomial::operator-(const OrderedPolynomial& o) const {
  return *this + o * cplx(-1.0);
}

OrderedPolynomial OrderedPolynomial::operator*(cplx s) const {
  std::map<Key, cplx> out = terms_;
  for (auto& [k, c] : out) c *= s;
  return OrderedPolynomial(hbar_, std::move(out));
}

OrderedPolynomial OrderedPolynomial::operator*(const OrderedPolynomial& o) const {
  require(hbar_ == o.hbar_, ErrorCode::invalid_argument, "mismatched hbar in operator algebra");
  // P^m Q^n = sum_k C(m,k) C(n,k) k! (-i hbar)^k Q^{n-k} P^{m-k}.
  const cplx mih(0.0, -hbar_);
  std::map<Key, cplx> out;
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : o.terms_) {
      const int m = ka.second;
      const int n = kb.first;
      cplx pw = 1.0;
      double fact = 1.0;
      for (int k = 0; k <= std::min(m, n); ++k) {
        if (k > 0) {
          pw *= mih;
          fact *= k;
        }
        const cplx coef = ca * cb * binom(m, k) * binom(n, k) * fact * pw;
        out[{ka.first + n - k, m - k + kb.second}] += coef;
      }
    }
  }
  return OrderedPolynomial(hbar_, std::move(out));
}

double OrderedPolynomial::max_abs_diff(const OrderedPolynomial& o) const {
  std::map<Key, cplx> diff = terms_;
  for (const auto& [k, c] : o.terms_) diff[k] -= c;
  double m = 0.0;
  for (const auto& [k, c] : diff) m = std::max(m, std::abs(c));
  return m;
}

OrderedPolynomial sym_lplus(const OrderedPolynomial& x, const OrderedPolynomial& y) {
  return (x * y + y * x) * cplx(0.5);
}

OrderedPolynomial sym_lminus(const OrderedPolynomial& x, const OrderedPolynomial& y) {
  return (x * y - y * x) * (cplx(1.0) / cplx(0.0, x.hbar()));
}

OrderedPolynomial weyl_symbolic(const PhasePolynomial& a, double hbar) {
  const OrderedPolynomial q = OrderedPolynomial::q(hbar);
  const OrderedPolynomial p = OrderedPolynomial::p(hbar);
  OrderedPolynomial acc(hbar);
  for (const auto& [k, c] : a.terms()) {
    OrderedPolynomial t = OrderedPolynomial::one(hbar);
    for (int j = 0; j < k.second; ++j) t = t * p;
    for (int j = 0; j < k.first; ++j) t = sym_lplus(q, t);
    acc = acc + t * c;
  }
  return acc;
}

}  // namespace fracq
