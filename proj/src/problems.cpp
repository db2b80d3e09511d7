#include "zocoop/problems.hpp"

#include <cmath>
#include <utility>

#include "zocoop/errors.hpp"

namespace zocoop {

Partition::Partition(std::vector<Eigen::Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw DimensionMismatch("partition: dims must be non-empty");
  }
  offsets_.reserve(dims_.size());
  for (const Eigen::Index d : dims_) {
    if (d <= 0) {
      throw DimensionMismatch("partition: every block dimension must be positive");
    }
    offsets_.push_back(total_);
    total_ += d;
  }
}

Partition Partition::uniform(int agents, Eigen::Index block_dim) {
  if (agents <= 0) {
    throw DimensionMismatch("partition: agent count must be positive");
  }
  return Partition(std::vector<Eigen::Index>(static_cast<size_t>(agents), block_dim));
}

JointDecision::JointDecision(Partition partition, Eigen::VectorXd flat)
    : partition_(std::move(partition)), flat_(std::move(flat)) {
  if (flat_.size() != partition_.total()) {
    throw DimensionMismatch("joint decision: flat length " +
                            std::to_string(flat_.size()) +
                            " does not match partition total " +
                            std::to_string(partition_.total()));
  }
}

void Problem::check_dims(const Eigen::VectorXd& x) const {
  if (x.size() != partition_.total()) {
    throw DimensionMismatch(name_ + ": joint vector length " +
                            std::to_string(x.size()) +
                            " does not match partition total " +
                            std::to_string(partition_.total()));
  }
}

double Problem::evaluate_local(int agent, const Eigen::VectorXd& x) const {
  check_dims(x);
  if (agent < 0 || agent >= partition_.agent_count()) {
    throw DimensionMismatch(name_ + ": agent index " + std::to_string(agent) +
                            " out of range");
  }
  return do_evaluate_local(agent, x);
}

double Problem::evaluate_global(const Eigen::VectorXd& x) const {
  check_dims(x);
  const int n = partition_.agent_count();
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += do_evaluate_local(i, x);
  return sum / static_cast<double>(n);
}

std::optional<Eigen::VectorXd> Problem::gradient_oracle(
    const Eigen::VectorXd& x) const {
  check_dims(x);
  return do_gradient(x);
}

Eigen::VectorXd sample_ball(rng::Stream& stream, Eigen::Index dim,
                            double radius) {
  Eigen::VectorXd v = stream.normal_vector(dim);
  const double norm = v.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(dim);
  const double r =
      radius * std::pow(stream.uniform01(), 1.0 / static_cast<double>(dim));
  return v * (r / norm);
}

Eigen::VectorXd Problem::sample_domain(rng::Stream& stream) const {
  return sample_ball(stream, partition_.total(), meta_.domain_radius);
}

namespace {

class SeparableQuadratic final : public Problem {
 public:
  SeparableQuadratic(Partition partition, double domain_radius)
      : Problem("separable_quadratic", std::move(partition),
                ProblemMeta{/*lipschitz_g=*/domain_radius,
                            /*smooth_l=*/1.0,
                            /*optimum_value=*/0.0,
                            /*minimizing=*/true,
                            /*domain_radius=*/domain_radius}) {}

 private:
  double do_evaluate_local(int, const Eigen::VectorXd& x) const override {
    return 0.5 * x.squaredNorm();
  }
  std::optional<Eigen::VectorXd> do_gradient(
      const Eigen::VectorXd& x) const override {
    return x;
  }
};

class LinearProbe final : public Problem {
 public:
  LinearProbe(Partition partition, Eigen::VectorXd a)
      : Problem("linear_probe", std::move(partition),
                ProblemMeta{/*lipschitz_g=*/a.norm(),
                            /*smooth_l=*/0.0,
                            /*optimum_value=*/std::nullopt,
                            /*minimizing=*/true,
                            /*domain_radius=*/10.0}),
        a_(std::move(a)) {
    if (a_.size() != this->partition().total()) {
      throw DimensionMismatch("linear_probe: coefficient length " +
                              std::to_string(a_.size()) +
                              " does not match partition total " +
                              std::to_string(this->partition().total()));
    }
  }

 private:
  double do_evaluate_local(int, const Eigen::VectorXd& x) const override {
    return a_.dot(x);
  }
  std::optional<Eigen::VectorXd> do_gradient(
      const Eigen::VectorXd&) const override {
    return a_;
  }

  Eigen::VectorXd a_;
};

class NonconvexCosine final : public Problem {
 public:
  NonconvexCosine(const Partition& partition, double lambda, double omega)
      : Problem("nonconvex_cosine", partition,
                make_meta(partition.total(), lambda, omega)),
        lambda_(lambda),
        omega_(omega) {}

 private:
  static ProblemMeta make_meta(Eigen::Index d, double lambda, double omega) {
    // Per coordinate: |d/dx x^2/(1+x^2)^ | peaks at 3*sqrt(3)/8, and
    // |d^2/dx^2| at 2 (x = 0); the cosine term adds lambda*omega and
    // lambda*omega^2.
    const double g_coord = 3.0 * std::sqrt(3.0) / 8.0 + lambda * omega;
    const double l_coord = 2.0 + lambda * omega * omega;
    ProblemMeta meta;
    meta.lipschitz_g = std::sqrt(static_cast<double>(d)) * g_coord;
    meta.smooth_l = l_coord;
    meta.minimizing = true;
    meta.domain_radius = 10.0;
    return meta;
  }

  double do_evaluate_local(int, const Eigen::VectorXd& x) const override {
    double sum = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double xk = x[k];
      sum += xk * xk / (1.0 + xk * xk) + lambda_ * std::cos(omega_ * xk);
    }
    return sum;
  }

  std::optional<Eigen::VectorXd> do_gradient(
      const Eigen::VectorXd& x) const override {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double xk = x[k];
      const double denom = 1.0 + xk * xk;
      g[k] = 2.0 * xk / (denom * denom) - lambda_ * omega_ * std::sin(omega_ * xk);
    }
    return g;
  }

  double lambda_;
  double omega_;
};

}  // namespace

ProblemPtr make_separable_quadratic(Partition partition, double domain_radius) {
  return std::make_shared<SeparableQuadratic>(std::move(partition),
                                              domain_radius);
}

ProblemPtr make_linear_probe(Partition partition, Eigen::VectorXd a) {
  return std::make_shared<LinearProbe>(std::move(partition), std::move(a));
}

ProblemPtr make_nonconvex_cosine(Partition partition, double lambda,
                                 double omega) {
  return std::make_shared<NonconvexCosine>(std::move(partition), lambda, omega);
}

}  // namespace zocoop
