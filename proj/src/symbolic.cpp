#include "ahres/symbolic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ahres {

QC& QC::operator*=(const QC& o) {
  mpq_class r = re * o.re - im * o.im;
  mpq_class i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

QC& QC::operator/=(const QC& o) {
  mpq_class n = o.norm2();
  if (sgn(n) == 0) throw std::domain_error("division by zero in QC");
  mpq_class r = (re * o.re + im * o.im) / n;
  mpq_class i = (im * o.re - re * o.im) / n;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

std::string QC::str() const {
  std::ostringstream os;
  if (sgn(im) == 0) {
    os << re;
  } else if (sgn(re) == 0) {
    os << im << "i";
  } else {
    os << "(" << re << (sgn(im) > 0 ? "+" : "") << im << "i)";
  }
  return os.str();
}

mpq_class rational_from_double(double v) {
  // exact binary value; callers pass dyadic or short decimal data
  mpq_class q(v);
  double r = std::round(v * 1e12);
  if (std::fabs(r - v * 1e12) < 1e-3 && std::fabs(v) < 1e6) {
    mpz_class num(r);
    q = mpq_class(num, mpz_class("1000000000000"));
    q.canonicalize();
  }
  return q;
}

Poly Poly::monomial(int d, QC c) {
  std::vector<QC> v(d + 1);
  v[d] = std::move(c);
  return Poly(std::move(v));
}

Poly Poly::from_doubles(const std::vector<double>& c) {
  std::vector<QC> v;
  for (double x : c) v.emplace_back(rational_from_double(x));
  return Poly(std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

QC Poly::eval(const QC& x) const {
  QC acc;
  for (int i = degree(); i >= 0; --i) acc = acc * x + c_[i];
  return acc;
}

std::complex<double> Poly::eval(std::complex<double> x) const {
  std::complex<double> acc = 0;
  for (int i = degree(); i >= 0; --i) acc = acc * x + c_[i].to_complex();
  return acc;
}

double Poly::max_abs_coeff() const {
  double m = 0;
  for (auto& c : c_) m = std::max(m, std::abs(c.to_complex()));
  return m;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<QC> v(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * QC(static_cast<long>(i));
  return Poly(std::move(v));
}

Poly Poly::conj() const {
  std::vector<QC> v;
  for (auto& c : c_) v.push_back(c.conj());
  return Poly(std::move(v));
}

Poly Poly::compose_affine(const QC& a, const QC& b) const {
  Poly lin(std::vector<QC>{b, a});
  Poly acc;
  for (int i = degree(); i >= 0; --i) acc = acc * lin + Poly(c_[i]);
  return acc;
}

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  Poly p = *this;
  QC inv = QC(1) / lead();
  p *= inv;
  return p;
}

std::string Poly::str(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i].str();
    if (i == 1) os << "*" << var;
    if (i > 1) os << "*" << var << "^" << i;
  }
  return os.str();
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator*=(const QC& s) {
  for (auto& c : c_) c *= s;
  trim();
  return *this;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& c : p.c_) c = -c;
  return p;
}

Poly operator+(Poly a, const Poly& b) { return a += b; }
Poly operator-(Poly a, const Poly& b) { return a -= b; }
Poly operator*(Poly a, const QC& s) { return a *= s; }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<QC> v(a.degree() + b.degree() + 1);
  for (int i = 0; i <= a.degree(); ++i) {
    if (a.coeffs()[i].is_zero()) continue;
    for (int j = 0; j <= b.degree(); ++j) v[i + j] += a.coeffs()[i] * b.coeffs()[j];
  }
  return Poly(std::move(v));
}

bool operator==(const Poly& a, const Poly& b) { return a.coeffs() == b.coeffs(); }

void Poly::divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  r = a;
  std::vector<QC> qv(std::max(0, a.degree() - b.degree() + 1));
  QC inv = QC(1) / b.lead();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int s = r.degree() - b.degree();
    QC f = r.lead() * inv;
    qv[s] = f;
    r -= Poly::monomial(s, f) * b;
  }
  q = Poly(std::move(qv));
}

Poly Poly::gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = r.monic();
  }
  return a.is_zero() ? Poly(1) : a.monic();
}

Poly lcm(const Poly& a, const Poly& b) {
  Poly g = Poly::gcd(a, b);
  Poly q, r;
  Poly::divmod(a * b, g, q, r);
  return q.monic();
}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  reduce();
}

void RatFunc::reduce() {
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (den_.degree() > 0) {
    Poly g = Poly::gcd(num_, den_);
    if (g.degree() > 0) {
      Poly q, r;
      Poly::divmod(num_, g, q, r);
      num_ = q;
      Poly::divmod(den_, g, q, r);
      den_ = q;
    }
  }
  QC l = den_.lead();
  if (l != QC(1)) {
    QC inv = QC(1) / l;
    num_ *= inv;
    den_ *= inv;
  }
}

QC RatFunc::eval(const QC& x) const { return num_.eval(x) / den_.eval(x); }

std::complex<double> RatFunc::eval(std::complex<double> x) const {
  return num_.eval(x) / den_.eval(x);
}

RatFunc RatFunc::derivative() const {
  return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RatFunc RatFunc::inverse() const { return RatFunc(den_, num_); }
RatFunc RatFunc::conj() const { return RatFunc(num_.conj(), den_.conj()); }

RatFunc RatFunc::compose_affine(const QC& a, const QC& b) const {
  return RatFunc(num_.compose_affine(a, b), den_.compose_affine(a, b));
}

std::string RatFunc::str() const {
  if (is_polynomial()) return num_.str();
  return "(" + num_.str() + ")/(" + den_.str() + ")";
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  reduce();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  reduce();
  return *this;
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
bool operator==(const RatFunc& a, const RatFunc& b) {
  return a.num() == b.num() && a.den() == b.den();
}

}  // namespace ahres
