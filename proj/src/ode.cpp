#include "sticky/ode.hpp"

#include "sticky/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sticky {

void OdeModel::augmented_rhs(const double* theta, const double* z, double t, double* dz) const
{
  const int n = state_dim(), d = param_dim();
  thread_local std::vector<double> gx, gt;
  gx.resize(static_cast<std::size_t>(n) * n);
  gt.resize(static_cast<std::size_t>(d) * n);
  rhs(theta, z, t, dz);
  rhs_grad_x(theta, z, t, gx.data());
  rhs_grad_theta(theta, z, t, gt.data());
  const double* A = z + n;
  double* dA = dz + n;
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < n; ++j) {
      double s = gt[k * n + j];
      for (int i = 0; i < n; ++i)
        s += A[k * n + i] * gx[i * n + j];
      dA[k * n + j] = s;
    }
}

Eigen::VectorXd OdeModel::rhs(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, double t) const
{
  Eigen::VectorXd dx(state_dim());
  rhs(theta.data(), x.data(), t, dx.data());
  return dx;
}

Eigen::MatrixXd OdeModel::rhs_grad_x(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, double t) const
{
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> g(state_dim(), state_dim());
  rhs_grad_x(theta.data(), x.data(), t, g.data());
  return g;
}

Eigen::MatrixXd OdeModel::rhs_grad_theta(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, double t) const
{
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> g(param_dim(), state_dim());
  rhs_grad_theta(theta.data(), x.data(), t, g.data());
  return g;
}

AugmentedTrajectory::AugmentedTrajectory(int n, int d, double h, double T)
  : n_(n)
  , d_(d)
  , stride_(static_cast<std::size_t>(n) * (1 + d))
  , h_(h)
  , T_(T)
{}

AugmentedState AugmentedTrajectory::node_state(std::size_t k) const
{
  const double* z = node(k);
  AugmentedState s;
  s.x = Eigen::Map<const Eigen::VectorXd>(z, n_);
  s.A = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(z + n_, d_, n_);
  return s;
}

AugmentedState AugmentedTrajectory::at(double t) const
{
  if (!(t >= 0.0) || t > T_ * (1.0 + 1e-12) + 1e-15)
    throw ParameterError("time outside the solved horizon");
  std::size_t K = n_nodes() - 1;
  if (K == 0)
    return node_state(0);
  std::size_t k = std::min(static_cast<std::size_t>(std::floor(t / h_)), K - 1);
  double w = t / h_ - static_cast<double>(k);
  AugmentedState a = node_state(k), b = node_state(k + 1);
  a.x = (1.0 - w) * a.x + w * b.x;
  a.A = (1.0 - w) * a.A + w * b.A;
  return a;
}

namespace {

void check_finite(const std::vector<double>& z, long step)
{
  for (double v : z)
    if (!std::isfinite(v))
      throw DivergenceError("non-finite ODE state", step);
}

void initial_augmented(const OdeModel& model, std::vector<double>& z)
{
  const int n = model.state_dim();
  z.assign(model.augmented_dim(), 0.0);
  Eigen::VectorXd x0 = model.initial_state();
  std::copy(x0.data(), x0.data() + n, z.begin());
}

struct Stepper
{
  const OdeModel& model;
  std::vector<double> k1, k2, k3, k4, tmp;

  explicit Stepper(const OdeModel& m)
    : model(m)
  {
    std::size_t D = m.augmented_dim();
    k1.resize(D);
    k2.resize(D);
    k3.resize(D);
    k4.resize(D);
    tmp.resize(D);
  }

  void euler(const double* th, const std::vector<double>& z, double t, double h, std::vector<double>& out)
  {
    model.augmented_rhs(th, z.data(), t, k1.data());
    for (std::size_t i = 0; i < z.size(); ++i)
      out[i] = z[i] + h * k1[i];
  }

  void rk4(const double* th, const std::vector<double>& z, double t, double h, std::vector<double>& out)
  {
    const std::size_t D = z.size();
    model.augmented_rhs(th, z.data(), t, k1.data());
    for (std::size_t i = 0; i < D; ++i)
      tmp[i] = z[i] + 0.5 * h * k1[i];
    model.augmented_rhs(th, tmp.data(), t + 0.5 * h, k2.data());
    for (std::size_t i = 0; i < D; ++i)
      tmp[i] = z[i] + 0.5 * h * k2[i];
    model.augmented_rhs(th, tmp.data(), t + 0.5 * h, k3.data());
    for (std::size_t i = 0; i < D; ++i)
      tmp[i] = z[i] + h * k3[i];
    model.augmented_rhs(th, tmp.data(), t + h, k4.data());
    for (std::size_t i = 0; i < D; ++i)
      out[i] = z[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  void step(SolverChoice::Kind kind, const double* th, const std::vector<double>& z, double t, double h,
            std::vector<double>& out)
  {
    if (kind == SolverChoice::Kind::euler)
      euler(th, z, t, h, out);
    else
      rk4(th, z, t, h, out);
  }
};

AugmentedTrajectory solve(const OdeModel& model, const Eigen::VectorXd& theta, double h, double T,
                          SolverChoice::Kind kind)
{
  if (!(h > 0.0) || !(T >= 0.0))
    throw ParameterError("h > 0 and T >= 0 required");
  if (theta.size() != model.param_dim())
    throw ParameterError("theta has wrong dimension");
  const std::size_t K = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
  AugmentedTrajectory tr(model.state_dim(), model.param_dim(), h, T);
  std::vector<double> z, zn(model.augmented_dim());
  initial_augmented(model, z);
  auto& raw = tr.raw();
  raw.reserve((K + 1) * z.size());
  raw.insert(raw.end(), z.begin(), z.end());
  Stepper st(model);
  for (std::size_t k = 0; k < K; ++k) {
    st.step(kind, theta.data(), z, k * h, h, zn);
    check_finite(zn, static_cast<long>(k + 1));
    z.swap(zn);
    raw.insert(raw.end(), z.begin(), z.end());
  }
  return tr;
}

} // namespace

AugmentedTrajectory solve_augmented_euler(const OdeModel& model, const Eigen::VectorXd& theta, double h, double T)
{
  return solve(model, theta, h, T, SolverChoice::Kind::euler);
}

AugmentedTrajectory solve_reference(const OdeModel& model, const Eigen::VectorXd& theta, double h_ref, double T)
{
  return solve(model, theta, h_ref, T, SolverChoice::Kind::reference);
}

AugmentedObserver::AugmentedObserver(const OdeModel& model, SolverChoice solver)
  : model_(model)
  , solver_(solver)
{
  if (!(solver.h > 0.0))
    throw ParameterError("solver step must be positive");
}

void AugmentedObserver::observe(const Eigen::VectorXd& theta, const std::vector<double>& times,
                                std::vector<double>& out)
{
  const std::size_t D = model_.augmented_dim();
  out.resize(times.size() * D);
  if (times.empty())
    return;
  Stepper st(model_);
  initial_augmented(model_, z_);
  znext_.resize(D);
  const double h = solver_.h;
  long k = 0;
  st.step(solver_.kind, theta.data(), z_, 0.0, h, znext_);
  check_finite(znext_, 1);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (!(t >= 0.0) || (i > 0 && t < times[i - 1]))
      throw ParameterError("observation times must be sorted and non-negative");
    const long kk = static_cast<long>(std::floor(t / h));
    while (k < kk) {
      z_.swap(znext_);
      ++k;
      st.step(solver_.kind, theta.data(), z_, k * h, h, znext_);
      check_finite(znext_, k + 1);
    }
    const double w = t / h - static_cast<double>(k);
    double* o = out.data() + i * D;
    for (std::size_t j = 0; j < D; ++j)
      o[j] = (1.0 - w) * z_[j] + w * znext_[j];
  }
}

namespace {

class Logistic final : public OdeModel
{
public:
  Logistic(double a1, double a2, double x0)
    : a1_(a1)
    , a2_(a2)
    , x0_(x0)
  {
    if (!(a1 > 0.0) || !(a2 > 0.0) || !(x0 > 0.0))
      throw ParameterError("logistic: a1, a2, x0 must be positive");
  }
  std::string name() const override { return "logistic"; }
  int state_dim() const override { return 1; }
  int param_dim() const override { return 1; }
  Eigen::VectorXd initial_state() const override { return Eigen::VectorXd::Constant(1, x0_); }

  double r(double th) const { return a1_ * th * th / (th * th + a2_); }
  double dr(double th) const { return 2.0 * a1_ * a2_ * th / ((th * th + a2_) * (th * th + a2_)); }

  void rhs(const double* th, const double* x, double, double* dx) const override
  {
    dx[0] = x[0] * (1.0 - r(th[0]) * x[0]);
  }
  void rhs_grad_x(const double* th, const double* x, double, double* g) const override
  {
    g[0] = 1.0 - 2.0 * r(th[0]) * x[0];
  }
  void rhs_grad_theta(const double* th, const double* x, double, double* g) const override
  {
    g[0] = -dr(th[0]) * x[0] * x[0];
  }

private:
  double a1_, a2_, x0_;
};

class VanDerPol final : public OdeModel
{
public:
  explicit VanDerPol(Eigen::Vector2d x0)
    : x0_(x0)
  {}
  std::string name() const override { return "van_der_pol"; }
  int state_dim() const override { return 2; }
  int param_dim() const override { return 1; }
  Eigen::VectorXd initial_state() const override { return x0_; }

  void rhs(const double* th, const double* x, double, double* dx) const override
  {
    dx[0] = x[1];
    dx[1] = th[0] * (1.0 - x[0] * x[0]) * x[1] - x[0];
  }
  void rhs_grad_x(const double* th, const double* x, double, double* g) const override
  {
    g[0] = 0.0;
    g[1] = -2.0 * th[0] * x[0] * x[1] - 1.0;
    g[2] = 1.0;
    g[3] = th[0] * (1.0 - x[0] * x[0]);
  }
  void rhs_grad_theta(const double*, const double* x, double, double* g) const override
  {
    g[0] = 0.0;
    g[1] = (1.0 - x[0] * x[0]) * x[1];
  }
  void augmented_rhs(const double* th, const double* z, double, double* dz) const override
  {
    const double x1 = z[0], x2 = z[1], A1 = z[2], A2 = z[3];
    const double q = 1.0 - x1 * x1;
    dz[0] = x2;
    dz[1] = th[0] * q * x2 - x1;
    dz[2] = A2;
    dz[3] = q * x2 + A1 * (-2.0 * th[0] * x1 * x2 - 1.0) + A2 * th[0] * q;
  }

private:
  Eigen::Vector2d x0_;
};

class LotkaVolterra final : public OdeModel
{
public:
  explicit LotkaVolterra(Eigen::Vector2d x0)
    : x0_(x0)
  {
    if (!(x0[0] > 0.0) || !(x0[1] > 0.0))
      throw ParameterError("lotka_volterra: populations must be positive");
  }
  std::string name() const override { return "lotka_volterra"; }
  int state_dim() const override { return 2; }
  int param_dim() const override { return 4; }
  Eigen::VectorXd initial_state() const override { return x0_; }

  void rhs(const double* th, const double* x, double, double* dx) const override
  {
    dx[0] = (th[0] - th[1] * x[1]) * x[0];
    dx[1] = (-th[2] + th[3] * x[0]) * x[1];
  }
  void rhs_grad_x(const double* th, const double* x, double, double* g) const override
  {
    g[0] = th[0] - th[1] * x[1];
    g[1] = th[3] * x[1];
    g[2] = -th[1] * x[0];
    g[3] = -th[2] + th[3] * x[0];
  }
  void rhs_grad_theta(const double*, const double* x, double, double* g) const override
  {
    const double uv = x[0] * x[1];
    g[0] = x[0];
    g[1] = 0.0;
    g[2] = -uv;
    g[3] = 0.0;
    g[4] = 0.0;
    g[5] = -x[1];
    g[6] = 0.0;
    g[7] = uv;
  }
  void augmented_rhs(const double* th, const double* z, double, double* dz) const override
  {
    const double u = z[0], v = z[1];
    const double g00 = th[0] - th[1] * v, g01 = th[3] * v, g10 = -th[1] * u, g11 = -th[2] + th[3] * u;
    const double uv = u * v;
    dz[0] = g00 * u;
    dz[1] = g11 * v;
    const double gt0[4] = {u, -uv, 0.0, 0.0};
    const double gt1[4] = {0.0, 0.0, -v, uv};
    for (int k = 0; k < 4; ++k) {
      const double a0 = z[2 + 2 * k], a1 = z[3 + 2 * k];
      dz[2 + 2 * k] = gt0[k] + a0 * g00 + a1 * g10;
      dz[3 + 2 * k] = gt1[k] + a0 * g01 + a1 * g11;
    }
  }

private:
  Eigen::Vector2d x0_;
};

class LinearGrowth final : public OdeModel
{
public:
  explicit LinearGrowth(double x0)
    : x0_(x0)
  {}
  std::string name() const override { return "linear_growth"; }
  int state_dim() const override { return 1; }
  int param_dim() const override { return 1; }
  Eigen::VectorXd initial_state() const override { return Eigen::VectorXd::Constant(1, x0_); }
  void rhs(const double* th, const double* x, double, double* dx) const override { dx[0] = th[0] * x[0]; }
  void rhs_grad_x(const double* th, const double*, double, double* g) const override { g[0] = th[0]; }
  void rhs_grad_theta(const double*, const double* x, double, double* g) const override { g[0] = x[0]; }

private:
  double x0_;
};

} // namespace

std::shared_ptr<OdeModel> make_logistic(double a1, double a2, double x0)
{
  return std::make_shared<Logistic>(a1, a2, x0);
}

std::shared_ptr<OdeModel> make_van_der_pol(Eigen::Vector2d x0)
{
  return std::make_shared<VanDerPol>(x0);
}

std::shared_ptr<OdeModel> make_lotka_volterra(Eigen::Vector2d x0)
{
  return std::make_shared<LotkaVolterra>(x0);
}

std::shared_ptr<OdeModel> make_linear_growth(double x0)
{
  return std::make_shared<LinearGrowth>(x0);
}

std::shared_ptr<OdeModel> builtin_model(const std::string& name)
{
  if (name == "logistic")
    return make_logistic();
  if (name == "van_der_pol")
    return make_van_der_pol();
  if (name == "lotka_volterra")
    return make_lotka_volterra();
  if (name == "linear_growth")
    return make_linear_growth();
  throw ParameterError("unknown ODE model '" + name + "'");
}

std::vector<std::string> builtin_model_names()
{
  return {"logistic", "van_der_pol", "lotka_volterra"};
}

double logistic_closed_form(double r, double x0, double t)
{
  double e = std::exp(t);
  return x0 * e / (1.0 + r * x0 * (e - 1.0));
}

double lotka_volterra_invariant(const Eigen::VectorXd& th, const Eigen::VectorXd& x)
{
  return th[3] * x[0] - th[2] * std::log(x[0]) + th[1] * x[1] - th[0] * std::log(x[1]);
}

} // namespace sticky
