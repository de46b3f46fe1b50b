#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <vector>

namespace ahres {

// Gaussian rational re + i*im.
struct QC {
  mpq_class re{0}, im{0};

  QC() = default;
  QC(long v) : re(v) {}
  QC(mpq_class r) : re(std::move(r)) {}
  QC(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  static QC I() { return QC(0, 1); }
  static QC frac(long p, long q) { mpq_class v(p, q); v.canonicalize(); return QC(v); }

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  QC conj() const { return QC(re, -im); }
  mpq_class norm2() const { return re * re + im * im; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string str() const;

  QC operator-() const { return QC(-re, -im); }
  QC& operator+=(const QC& o) { re += o.re; im += o.im; return *this; }
  QC& operator-=(const QC& o) { re -= o.re; im -= o.im; return *this; }
  QC& operator*=(const QC& o);
  QC& operator/=(const QC& o);
};

inline QC operator+(QC a, const QC& b) { return a += b; }
inline QC operator-(QC a, const QC& b) { return a -= b; }
inline QC operator*(QC a, const QC& b) { return a *= b; }
inline QC operator/(QC a, const QC& b) { return a /= b; }
inline bool operator==(const QC& a, const QC& b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(const QC& a, const QC& b) { return !(a == b); }

// Polynomial in one variable with Gaussian rational coefficients, ascending order.
class Poly {
 public:
  Poly() = default;
  Poly(QC c0) { if (!c0.is_zero()) c_.push_back(std::move(c0)); }
  Poly(long c0) : Poly(QC(c0)) {}
  explicit Poly(std::vector<QC> c) : c_(std::move(c)) { trim(); }

  static Poly x() { return Poly(std::vector<QC>{QC(0), QC(1)}); }
  static Poly monomial(int d, QC c = QC(1));
  static Poly from_doubles(const std::vector<double>& c);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  const std::vector<QC>& coeffs() const { return c_; }
  QC coeff(int i) const { return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : QC(0); }
  QC lead() const { return c_.empty() ? QC(0) : c_.back(); }

  QC eval(const QC& x) const;
  std::complex<double> eval(std::complex<double> x) const;
  double max_abs_coeff() const;
  Poly derivative() const;
  Poly conj() const;
  // p(a*x + b)
  Poly compose_affine(const QC& a, const QC& b) const;
  Poly monic() const;
  std::string str(const std::string& var = "mu") const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const QC& s);
  Poly operator-() const;

  static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r);
  static Poly gcd(Poly a, Poly b);

 private:
  void trim();
  std::vector<QC> c_;
};

Poly operator+(Poly a, const Poly& b);
Poly operator-(Poly a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(Poly a, const QC& s);
bool operator==(const Poly& a, const Poly& b);
inline bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

// Reduced rational function num/den with monic denominator.
class RatFunc {
 public:
  RatFunc() : den_(1) {}
  RatFunc(QC c) : num_(std::move(c)), den_(1) {}
  RatFunc(long c) : RatFunc(QC(c)) {}
  RatFunc(Poly p) : num_(std::move(p)), den_(1) {}
  RatFunc(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }
  QC eval(const QC& x) const;
  std::complex<double> eval(std::complex<double> x) const;
  RatFunc derivative() const;
  RatFunc inverse() const;
  RatFunc conj() const;
  RatFunc compose_affine(const QC& a, const QC& b) const;
  std::string str() const;

  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc operator-() const;

 private:
  void reduce();
  Poly num_, den_;
};

RatFunc operator+(RatFunc a, const RatFunc& b);
RatFunc operator-(RatFunc a, const RatFunc& b);
RatFunc operator*(RatFunc a, const RatFunc& b);
RatFunc operator/(const RatFunc& a, const RatFunc& b);
bool operator==(const RatFunc& a, const RatFunc& b);
inline bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

Poly lcm(const Poly& a, const Poly& b);
mpq_class rational_from_double(double v);

}  // namespace ahres
