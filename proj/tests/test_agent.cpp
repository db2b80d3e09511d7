#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "zocoop/agent.hpp"
#include "zocoop/errors.hpp"
#include "zocoop/rng.hpp"

using Eigen::VectorXd;
using zocoop::AgentState;
using zocoop::PerturbationBuffer;

namespace {

VectorXd vec(std::initializer_list<double> xs) {
  VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v[k++] = x;
  return v;
}

}  // namespace

TEST_CASE("perturbation buffer retains exactly the last bound+1 rounds") {
  const int kBound = 5;
  PerturbationBuffer buffer(kBound);
  CHECK(buffer.capacity() == kBound + 1);

  for (std::int64_t t = 0; t <= kBound; ++t) {
    buffer.store(t, VectorXd::Constant(1, static_cast<double>(t)));
  }
  for (std::int64_t t = 0; t <= kBound; ++t) {
    CHECK(buffer.has(t));
    CHECK(buffer.lookup(t)[0] == static_cast<double>(t));
  }

  buffer.store(kBound + 1, VectorXd::Constant(1, 99.0));
  CHECK_FALSE(buffer.has(0));
  CHECK_THROWS_AS(buffer.lookup(0), zocoop::BufferMiss);
  CHECK(buffer.has(1));
  CHECK(buffer.lookup(kBound + 1)[0] == 99.0);
}

TEST_CASE("buffer rejects duplicate rounds and unknown lookups") {
  PerturbationBuffer buffer(2);
  buffer.store(0, VectorXd::Zero(2));
  CHECK_THROWS_AS(buffer.store(0, VectorXd::Ones(2)), zocoop::DuplicateRound);
  CHECK_THROWS_AS(buffer.lookup(1), zocoop::BufferMiss);
  CHECK_FALSE(buffer.has(-1));
}

TEST_CASE("drawn perturbations are stored and reproducible") {
  zocoop::rng::Stream a(1234);
  zocoop::rng::Stream b(1234);
  AgentState first(0, VectorXd::Zero(3), 2, 2);
  AgentState second(0, VectorXd::Zero(3), 2, 2);

  VectorXd za = zocoop::draw_perturbation(first, 0, a);
  VectorXd zb = zocoop::draw_perturbation(second, 0, b);
  REQUIRE(za.size() == 3);
  CHECK(za == zb);
  CHECK(first.buffer.lookup(0) == za);

  CHECK_THROWS_AS(zocoop::draw_perturbation(first, 0, a), zocoop::DuplicateRound);
}

TEST_CASE("two-point differences recover directional derivatives") {
  CHECK(zocoop::two_point_derivative(7.0, 7.0, 0.5) == 0.0);
  CHECK(zocoop::two_point_derivative(1.5, -1.5, 0.5) == 3.0);
  CHECK(zocoop::two_point_derivative(1.44, 0.64, 0.1) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("two-point differences reject vanishing smoothing radii") {
  CHECK_THROWS_AS(zocoop::two_point_derivative(1.0, 0.0, 1e-9),
                  zocoop::SmoothingUnderflow);
  CHECK_THROWS_AS(zocoop::two_point_derivative(1.0, 0.0, 0.0),
                  zocoop::SmoothingUnderflow);
  CHECK_THROWS_AS(zocoop::two_point_derivative(1.0, 0.0, -0.1),
                  zocoop::SmoothingUnderflow);
  CHECK_NOTHROW(zocoop::two_point_derivative(1.0, 0.0, 1e-9, 1e-10));
}

TEST_CASE("partial gradients average stale derivative-weighted perturbations") {
  AgentState state(1, VectorXd::Zero(1), 5, 2);
  state.buffer.store(3, vec({-1.0}));
  state.buffer.store(5, vec({0.5}));
  state.table.update({{0, 5, 2.0}, {1, 3, 4.0}});

  VectorXd g = zocoop::assemble_partial_gradient(state, 2);
  REQUIRE(g.size() == 1);
  CHECK(g[0] == -1.5);
}

TEST_CASE("peers never heard from contribute nothing") {
  AgentState state(1, VectorXd::Zero(1), 5, 2);
  state.buffer.store(4, vec({0.5}));
  state.table.update({{1, 4, 2.0}});

  VectorXd g = zocoop::assemble_partial_gradient(state, 2);
  CHECK(g[0] == 0.5);

  AgentState empty(0, VectorXd::Zero(2), 5, 3);
  VectorXd zero = zocoop::assemble_partial_gradient(empty, 3);
  CHECK(zero.norm() == 0.0);
}

TEST_CASE("assembly demands the paired perturbation still be buffered") {
  AgentState state(0, VectorXd::Zero(1), 1, 2);
  state.buffer.store(0, vec({1.0}));
  state.buffer.store(1, vec({2.0}));
  state.buffer.store(2, vec({3.0}));
  state.table.update({{1, 0, 5.0}});
  CHECK_THROWS_AS(zocoop::assemble_partial_gradient(state, 2), zocoop::BufferMiss);
}

TEST_CASE("updates descend along the assembled direction") {
  AgentState state(0, vec({1.0}), 2, 2);
  zocoop::apply_update(state, vec({-1.5}), 0.05);
  CHECK(state.block[0] == doctest::Approx(1.075).epsilon(1e-15));

  zocoop::apply_update(state, vec({0.0}), 0.5);
  CHECK(state.block[0] == doctest::Approx(1.075).epsilon(1e-15));
}

TEST_CASE("updates reject bad shapes and non-finite values") {
  AgentState state(0, vec({1.0, 2.0}), 2, 2);
  CHECK_THROWS_AS(zocoop::apply_update(state, vec({1.0}), 0.1),
                  zocoop::DimensionMismatch);

  VectorXd nan_g = vec({0.0, std::numeric_limits<double>::quiet_NaN()});
  CHECK_THROWS_AS(zocoop::apply_update(state, nan_g, 0.1), zocoop::NonFiniteUpdate);

  AgentState huge(0, vec({1e308}), 2, 2);
  CHECK_THROWS_AS(zocoop::apply_update(huge, vec({-1e308}), 10.0),
                  zocoop::NonFiniteUpdate);
  CHECK(huge.block[0] == 1e308);
}