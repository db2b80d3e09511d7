#ifndef ZOCOOP_PROBLEMS_HPP
#define ZOCOOP_PROBLEMS_HPP

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zocoop/rng.hpp"

namespace zocoop {

/// How the joint decision vector is split across agents: agent i owns a
/// block of dims[i] coordinates, in order.
class Partition {
 public:
  explicit Partition(std::vector<Eigen::Index> dims);

  /// Convenience: n agents with identical block size.
  static Partition uniform(int agents, Eigen::Index block_dim);

  int agent_count() const { return static_cast<int>(dims_.size()); }
  Eigen::Index dim(int agent) const { return dims_.at(agent); }
  Eigen::Index offset(int agent) const { return offsets_.at(agent); }
  Eigen::Index total() const { return total_; }
  const std::vector<Eigen::Index>& dims() const { return dims_; }

 private:
  std::vector<Eigen::Index> dims_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index total_ = 0;
};

/// The joint decision x = (x^1,...,x^n), stored flat with block views.
class JointDecision {
 public:
  JointDecision(Partition partition, Eigen::VectorXd flat);

  const Partition& partition() const { return partition_; }
  const Eigen::VectorXd& flat() const { return flat_; }
  Eigen::VectorXd block(int agent) const {
    return flat_.segment(partition_.offset(agent), partition_.dim(agent));
  }

 private:
  Partition partition_;
  Eigen::VectorXd flat_;
};

/// Regularity metadata. G and L, when present, hold over the documented
/// evaluation domain (a ball of domain_radius around the origin unless the
/// problem overrides sample_domain). optimum_value is f* in minimization
/// orientation. minimizing records whether the underlying objective was
/// native minimization; maximization problems evaluate the negated
/// objective so the engine always descends.
struct ProblemMeta {
  std::optional<double> lipschitz_g;
  std::optional<double> smooth_l;
  std::optional<double> optimum_value;
  bool minimizing = true;
  double domain_radius = 10.0;
};

/// A cooperative cost suite: one local cost per agent over the joint
/// decision, averaged into the global objective. Evaluation is pure and
/// noiseless; instances are immutable after construction and safe to share
/// across threads.
class Problem {
 public:
  virtual ~Problem() = default;

  const Partition& partition() const { return partition_; }
  const ProblemMeta& meta() const { return meta_; }
  const std::string& name() const { return name_; }

  /// Local cost f_i at the joint point. Throws DimensionMismatch.
  double evaluate_local(int agent, const Eigen::VectorXd& x) const;
  double evaluate_local(int agent, const JointDecision& x) const {
    return evaluate_local(agent, x.flat());
  }

  /// Global objective (1/n) * sum_i f_i(x).
  double evaluate_global(const Eigen::VectorXd& x) const;
  double evaluate_global(const JointDecision& x) const {
    return evaluate_global(x.flat());
  }

  /// Analytic gradient of the global objective, where implemented;
  /// nullopt for genuinely black-box problems. Diagnostics only: the
  /// algorithm itself never calls this.
  std::optional<Eigen::VectorXd> gradient_oracle(const Eigen::VectorXd& x) const;

  /// A random point in the documented evaluation domain (used by sampled
  /// regularity checks). Default: uniform in the ball of domain_radius.
  virtual Eigen::VectorXd sample_domain(rng::Stream& stream) const;

 protected:
  Problem(std::string name, Partition partition, ProblemMeta meta)
      : name_(std::move(name)),
        partition_(std::move(partition)),
        meta_(std::move(meta)) {}

  virtual double do_evaluate_local(int agent, const Eigen::VectorXd& x) const = 0;
  virtual std::optional<Eigen::VectorXd> do_gradient(
      const Eigen::VectorXd& x) const {
    (void)x;
    return std::nullopt;
  }

  ProblemMeta& mutable_meta() { return meta_; }

 private:
  void check_dims(const Eigen::VectorXd& x) const;

  std::string name_;
  Partition partition_;
  ProblemMeta meta_;
};

using ProblemPtr = std::shared_ptr<const Problem>;

/// f_i(x) = 0.5*||x||^2 for every agent. G holds on the ball of
/// domain_radius (G = radius), L = 1 globally, f* = 0.
ProblemPtr make_separable_quadratic(Partition partition,
                                    double domain_radius = 10.0);

/// f_i(x) = <a, x> for every agent; exact two-point recovery.
/// G = ||a||, L = 0.
ProblemPtr make_linear_probe(Partition partition, Eigen::VectorXd a);

/// f_i(x) = sum_k x_k^2/(1+x_k^2) + lambda*cos(omega*x_k); smooth, bounded,
/// nonconvex. Closed-form G and L per coordinate.
ProblemPtr make_nonconvex_cosine(Partition partition, double lambda = 0.1,
                                 double omega = 3.0);

/// Uniform point in the ball of the given radius (dimension-correct).
Eigen::VectorXd sample_ball(rng::Stream& stream, Eigen::Index dim,
                            double radius);

}  // namespace zocoop

#endif  // ZOCOOP_PROBLEMS_HPP
