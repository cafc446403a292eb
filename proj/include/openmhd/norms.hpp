#pragma once

#include <limits>

#include "openmhd/field.hpp"

namespace openmhd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class TimeAggregation { SupTime, LpTime };
enum class FieldSelector { Rho, U, Theta, B };

/// Selects a discrete W^{k,q} norm in space, aggregated in time either as a
/// supremum over snapshots or as a rectangle-rule L^p integral.
struct NormSpec {
  double p = 2.0;
  double q = 2.0;
  FieldSelector field = FieldSelector::Rho;
  TimeAggregation aggregation = TimeAggregation::SupTime;
  int order = 0;

  void validate() const;
};

/// Midpoint-rule integral of |f|^q: each cell contributes its area times
/// |mean of its four corner values|^q.
double integral_pow(const Grid& g, const ScalarField& f, double q);

/// Sum over multi-indices |alpha| <= order of ||D^alpha f||_q^q, returned as
/// the q-th root. q = infinity takes the largest nodal magnitude instead.
double spatial_norm(const Grid& g, const ScalarField& f, double q, int order);
double spatial_norm(const Grid& g, const VectorField& v, double q, int order);

/// Same as spatial_norm but restricted to multi-indices with |alpha| == order.
double spatial_seminorm(const Grid& g, const ScalarField& f, double q, int order);
double spatial_seminorm(const Grid& g, const VectorField& v, double q, int order);

double discrete_norm(const Grid& g, const State& s, const NormSpec& spec);
double discrete_space_time_norm(const Grid& g, const Trajectory& traj, const NormSpec& spec);

}  // namespace openmhd
