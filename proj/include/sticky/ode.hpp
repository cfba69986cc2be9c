#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

namespace sticky {

//! x' = f_theta(x, t) with analytic derivatives. Matrix layouts are row-major:
//! grad_x[i*n + j] = d f_j / d x_i and grad_theta[k*n + j] = d f_j / d theta_k,
//! so the sensitivity A (d x n, A_kj = d x_j / d theta_k) obeys A' = grad_theta + A grad_x.
class OdeModel
{
public:
  virtual ~OdeModel() = default;

  virtual std::string name() const = 0;
  virtual int state_dim() const = 0;
  virtual int param_dim() const = 0;
  virtual Eigen::VectorXd initial_state() const = 0;

  virtual void rhs(const double* theta, const double* x, double t, double* dx) const = 0;
  virtual void rhs_grad_x(const double* theta, const double* x, double t, double* gx) const = 0;
  virtual void rhs_grad_theta(const double* theta, const double* x, double t, double* gt) const = 0;

  //! Right-hand side of the augmented system z = (x, A), z of length n + d n.
  virtual void augmented_rhs(const double* theta, const double* z, double t, double* dz) const;

  int augmented_dim() const { return state_dim() * (1 + param_dim()); }

  Eigen::VectorXd rhs(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, double t) const;
  Eigen::MatrixXd rhs_grad_x(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, double t) const;
  Eigen::MatrixXd rhs_grad_theta(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, double t) const;
};

struct AugmentedState
{
  Eigen::VectorXd x;
  //! d x n, A(k, j) = d x_j / d theta_k
  Eigen::MatrixXd A;
};

//! Node values z(k h), k = 0..K, with the piecewise-linear extension between nodes.
class AugmentedTrajectory
{
public:
  AugmentedTrajectory(int n, int d, double h, double T);

  double step() const { return h_; }
  double horizon() const { return T_; }
  std::size_t n_nodes() const { return nodes_.size() / stride_; }
  const double* node(std::size_t k) const { return nodes_.data() + k * stride_; }
  AugmentedState node_state(std::size_t k) const;
  AugmentedState at(double t) const;

  std::vector<double>& raw() { return nodes_; }

private:
  int n_, d_;
  std::size_t stride_;
  double h_, T_;
  std::vector<double> nodes_;
};

AugmentedTrajectory solve_augmented_euler(const OdeModel& model, const Eigen::VectorXd& theta, double h, double T);
AugmentedTrajectory solve_reference(const OdeModel& model, const Eigen::VectorXd& theta, double h_ref, double T);

struct SolverChoice
{
  enum class Kind { reference, euler } kind = Kind::reference;
  double h = 1e-4;
  static SolverChoice reference(double h_ref) { return {Kind::reference, h_ref}; }
  static SolverChoice euler(double h) { return {Kind::euler, h}; }
};

//! Streams the augmented solution to the sorted times without storing the
//! trajectory. out[i * (n + d n) + .] receives z(times[i]).
class AugmentedObserver
{
public:
  AugmentedObserver(const OdeModel& model, SolverChoice solver);
  void observe(const Eigen::VectorXd& theta, const std::vector<double>& times, std::vector<double>& out);

private:
  const OdeModel& model_;
  SolverChoice solver_;
  std::vector<double> z_, znext_, k1_, k2_, k3_, k4_, tmp_;
};

//! x' = x (1 - r(theta) x), r(theta) = a1 theta^2 / (theta^2 + a2).
std::shared_ptr<OdeModel> make_logistic(double a1 = 1.0, double a2 = 1.0, double x0 = 0.5);
//! x1' = x2, x2' = theta (1 - x1^2) x2 - x1.
std::shared_ptr<OdeModel> make_van_der_pol(Eigen::Vector2d x0 = Eigen::Vector2d(2.0, 0.0));
//! u' = (alpha - beta v) u, v' = (-gamma_lv + delta u) v, theta = (alpha, beta, gamma_lv, delta).
std::shared_ptr<OdeModel> make_lotka_volterra(Eigen::Vector2d x0 = Eigen::Vector2d(30.0, 4.0));
//! x' = theta x (scalar), for sensitivity checks.
std::shared_ptr<OdeModel> make_linear_growth(double x0 = 1.0);

std::shared_ptr<OdeModel> builtin_model(const std::string& name);
std::vector<std::string> builtin_model_names();

//! Closed-form logistic state for constant rate r.
double logistic_closed_form(double r, double x0, double t);
//! delta u - gamma_lv ln u + beta v - alpha ln v
double lotka_volterra_invariant(const Eigen::VectorXd& theta, const Eigen::VectorXd& x);

} // namespace sticky
