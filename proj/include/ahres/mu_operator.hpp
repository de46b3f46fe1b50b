#pragma once

#include "ahres/symbolic.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ahres {

// Scalar differential operator sum_{p,j} t^p * a_{p,j}(mu) * d_mu^j, where t is a
// free parameter (homogeneity weight s or spectral parameter sigma).
class OpEntry {
 public:
  using Key = std::pair<int, int>;  // (parameter power p, derivative order j)

  OpEntry() = default;
  OpEntry(RatFunc f) { set(0, 0, std::move(f)); }
  OpEntry(long c) : OpEntry(RatFunc(c)) {}

  static OpEntry dmu(int j = 1) { OpEntry e; e.set(0, j, RatFunc(1)); return e; }
  static OpEntry param(int p = 1) { OpEntry e; e.set(p, 0, RatFunc(1)); return e; }
  static OpEntry term(int p, int j, RatFunc f) { OpEntry e; e.set(p, j, std::move(f)); return e; }

  const std::map<Key, RatFunc>& terms() const { return t_; }
  RatFunc coeff(int p, int j) const;
  void set(int p, int j, RatFunc f);
  bool is_zero() const { return t_.empty(); }
  int order() const;        // highest j, -1 if zero
  int param_degree() const; // highest p, -1 if zero

  OpEntry times_param(int p = 1) const;
  // t_old = a * t_new + b
  OpEntry substitute(const QC& a, const QC& b) const;
  OpEntry eval_param(const QC& t) const;
  // kappa^{-1} E kappa for a factor with logarithmic derivative r (order 0, may carry t)
  OpEntry conjugate_log(const OpEntry& r) const;
  OpEntry conj_coeffs() const;

  OpEntry& operator+=(const OpEntry& o);
  OpEntry& operator-=(const OpEntry& o);
  OpEntry operator-() const;

 private:
  std::map<Key, RatFunc> t_;
};

OpEntry operator+(OpEntry a, const OpEntry& b);
OpEntry operator-(OpEntry a, const OpEntry& b);
OpEntry operator*(const RatFunc& f, const OpEntry& e);  // left multiplication
OpEntry compose(const OpEntry& a, const OpEntry& b);     // a o b
bool operator==(const OpEntry& a, const OpEntry& b);
inline bool operator!=(const OpEntry& a, const OpEntry& b) { return !(a == b); }

// Matrix of OpEntry acting on slot vectors.
class MuOp {
 public:
  MuOp() = default;
  MuOp(int rows, int cols) : rows_(rows), cols_(cols), e_(rows * cols) {}
  static MuOp identity(int n);
  static MuOp diag(const std::vector<OpEntry>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  OpEntry& operator()(int i, int j) { return e_[i * cols_ + j]; }
  const OpEntry& operator()(int i, int j) const { return e_[i * cols_ + j]; }

  bool is_zero() const;
  int order() const;
  int param_degree() const;
  MuOp substitute(const QC& a, const QC& b) const;
  MuOp eval_param(const QC& t) const;
  MuOp conjugate_log(const OpEntry& r) const;
  MuOp transpose() const;
  MuOp block(int r0, int c0, int nr, int nc) const;
  void set_block(int r0, int c0, const MuOp& b);

  // Numerical application to sampled coefficient data at a point: returns the
  // matrix sum_j C_j(mu) * deriv_j where deriv_j[c] is the j-th derivative of slot c.
  Eigen::VectorXcd apply_at(std::complex<double> t, double mu,
                            const std::vector<Eigen::VectorXcd>& derivs) const;

  MuOp& operator+=(const MuOp& o);
  MuOp& operator-=(const MuOp& o);

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<OpEntry> e_;
};

MuOp operator+(MuOp a, const MuOp& b);
MuOp operator-(MuOp a, const MuOp& b);
MuOp operator*(const MuOp& a, const MuOp& b);  // composition
MuOp operator*(const RatFunc& f, const MuOp& a);
bool operator==(const MuOp& a, const MuOp& b);
inline bool operator!=(const MuOp& a, const MuOp& b) { return !(a == b); }

std::string to_string(const OpEntry& e, const std::string& param = "t");

}  // namespace ahres
