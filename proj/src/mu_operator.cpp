#include "ahres/mu_operator.hpp"

#include <sstream>
#include <stdexcept>

namespace ahres {

namespace {

std::vector<std::vector<long>> binomials(int n) {
  std::vector<std::vector<long>> c(n + 1, std::vector<long>(n + 1, 0));
  for (int i = 0; i <= n; ++i) {
    c[i][0] = 1;
    for (int j = 1; j <= i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
  }
  return c;
}

}  // namespace

RatFunc OpEntry::coeff(int p, int j) const {
  auto it = t_.find({p, j});
  return it == t_.end() ? RatFunc() : it->second;
}

void OpEntry::set(int p, int j, RatFunc f) {
  if (f.is_zero())
    t_.erase({p, j});
  else
    t_[{p, j}] = std::move(f);
}

int OpEntry::order() const {
  int m = -1;
  for (auto& [k, v] : t_) m = std::max(m, k.second);
  return m;
}

int OpEntry::param_degree() const {
  int m = -1;
  for (auto& [k, v] : t_) m = std::max(m, k.first);
  return m;
}

OpEntry OpEntry::times_param(int p) const {
  OpEntry r;
  for (auto& [k, v] : t_) r.t_[{k.first + p, k.second}] = v;
  return r;
}

OpEntry OpEntry::substitute(const QC& a, const QC& b) const {
  int pmax = std::max(param_degree(), 0);
  auto C = binomials(pmax);
  std::vector<QC> apow(pmax + 1, QC(1)), bpow(pmax + 1, QC(1));
  for (int i = 1; i <= pmax; ++i) {
    apow[i] = apow[i - 1] * a;
    bpow[i] = bpow[i - 1] * b;
  }
  OpEntry r;
  for (auto& [k, v] : t_) {
    int p = k.first;
    for (int q = 0; q <= p; ++q) {
      QC f = apow[q] * bpow[p - q] * QC(C[p][q]);
      if (f.is_zero()) continue;
      r += OpEntry::term(q, k.second, v * RatFunc(f));
    }
  }
  return r;
}

OpEntry OpEntry::eval_param(const QC& t) const { return substitute(QC(0), t); }

OpEntry OpEntry::conjugate_log(const OpEntry& r) const {
  // d -> d + r inside, i.e. E o kappa = kappa * E'
  OpEntry shifted = OpEntry::dmu() + r;
  int jmax = std::max(order(), 0);
  std::vector<OpEntry> pw(jmax + 1);
  pw[0] = OpEntry(1);
  for (int j = 1; j <= jmax; ++j) pw[j] = compose(shifted, pw[j - 1]);
  OpEntry out;
  for (auto& [k, v] : t_) out += (v * pw[k.second]).times_param(k.first);
  return out;
}

OpEntry OpEntry::conj_coeffs() const {
  OpEntry r;
  for (auto& [k, v] : t_) r.t_[k] = v.conj();
  return r;
}

OpEntry& OpEntry::operator+=(const OpEntry& o) {
  for (auto& [k, v] : o.t_) {
    auto it = t_.find(k);
    if (it == t_.end()) {
      t_[k] = v;
    } else {
      it->second += v;
      if (it->second.is_zero()) t_.erase(it);
    }
  }
  return *this;
}

OpEntry& OpEntry::operator-=(const OpEntry& o) { return *this += -o; }

OpEntry OpEntry::operator-() const {
  OpEntry r;
  for (auto& [k, v] : t_) r.t_[k] = -v;
  return r;
}

OpEntry operator+(OpEntry a, const OpEntry& b) { return a += b; }
OpEntry operator-(OpEntry a, const OpEntry& b) { return a -= b; }

OpEntry operator*(const RatFunc& f, const OpEntry& e) {
  OpEntry r;
  if (f.is_zero()) return r;
  for (auto& [k, v] : e.terms()) r.set(k.first, k.second, f * v);
  return r;
}

OpEntry compose(const OpEntry& a, const OpEntry& b) {
  int jmax = std::max(a.order(), 0);
  auto C = binomials(jmax);
  OpEntry r;
  for (auto& [ka, va] : a.terms()) {
    int j = ka.second;
    for (auto& [kb, vb] : b.terms()) {
      RatFunc bd = vb;
      // d^j (b d^k) = sum_i C(j,i) b^{(i)} d^{j-i+k}
      for (int i = 0; i <= j; ++i) {
        if (i > 0) bd = bd.derivative();
        if (bd.is_zero()) break;
        r += OpEntry::term(ka.first + kb.first, j - i + kb.second,
                           va * bd * RatFunc(QC(C[j][i])));
      }
    }
  }
  return r;
}

bool operator==(const OpEntry& a, const OpEntry& b) { return a.terms() == b.terms(); }

MuOp MuOp::identity(int n) {
  MuOp m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = OpEntry(1);
  return m;
}

MuOp MuOp::diag(const std::vector<OpEntry>& d) {
  MuOp m(d.size(), d.size());
  for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

bool MuOp::is_zero() const {
  for (auto& e : e_)
    if (!e.is_zero()) return false;
  return true;
}

int MuOp::order() const {
  int m = -1;
  for (auto& e : e_) m = std::max(m, e.order());
  return m;
}

int MuOp::param_degree() const {
  int m = -1;
  for (auto& e : e_) m = std::max(m, e.param_degree());
  return m;
}

MuOp MuOp::substitute(const QC& a, const QC& b) const {
  MuOp r(rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i].substitute(a, b);
  return r;
}

MuOp MuOp::eval_param(const QC& t) const { return substitute(QC(0), t); }

MuOp MuOp::conjugate_log(const OpEntry& r) const {
  MuOp out(rows_, cols_);
  for (size_t i = 0; i < e_.size(); ++i) out.e_[i] = e_[i].conjugate_log(r);
  return out;
}

MuOp MuOp::transpose() const {
  MuOp t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

MuOp MuOp::block(int r0, int c0, int nr, int nc) const {
  MuOp b(nr, nc);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void MuOp::set_block(int r0, int c0, const MuOp& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Eigen::VectorXcd MuOp::apply_at(std::complex<double> t, double mu,
                                const std::vector<Eigen::VectorXcd>& derivs) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int c = 0; c < cols_; ++c)
      for (auto& [k, v] : (*this)(i, c).terms()) {
        if (k.second >= static_cast<int>(derivs.size()))
          throw std::invalid_argument("apply_at: not enough derivative data");
        out(i) += std::pow(t, k.first) * v.eval(std::complex<double>(mu, 0)) *
                  derivs[k.second](c);
      }
  return out;
}

MuOp& MuOp::operator+=(const MuOp& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("MuOp shape mismatch");
  for (size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
  return *this;
}

MuOp& MuOp::operator-=(const MuOp& o) {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("MuOp shape mismatch");
  for (size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
  return *this;
}

MuOp operator+(MuOp a, const MuOp& b) { return a += b; }
MuOp operator-(MuOp a, const MuOp& b) { return a -= b; }

MuOp operator*(const MuOp& a, const MuOp& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("MuOp composition shape mismatch");
  MuOp r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      for (int k = 0; k < a.cols(); ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        r(i, j) += compose(a(i, k), b(k, j));
      }
  return r;
}

MuOp operator*(const RatFunc& f, const MuOp& a) {
  MuOp r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = f * a(i, j);
  return r;
}

bool operator==(const MuOp& a, const MuOp& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

std::string to_string(const OpEntry& e, const std::string& param) {
  if (e.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [k, v] : e.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "[" << v.str() << "]";
    if (k.first > 0) os << "*" << param << "^" << k.first;
    if (k.second > 0) os << "*d^" << k.second;
  }
  return os.str();
}

}  // namespace ahres
