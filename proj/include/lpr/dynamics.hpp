#pragma once

#include "lpr/bundle.hpp"
#include "lpr/christoffel.hpp"
#include "lpr/gaugefield.hpp"
#include "lpr/model.hpp"

namespace lpr {

// (x, f~, xdot, f~dot, p); also the integrator's state ordering.
struct ReducedState {
  VecD x, f, xdot, fdot, p;

  static ReducedState from_vector(const VecD& y, const Dims& dims);
  VecD to_vector() const;
};

// (Q, f, Qdot, fdot) on P x V.
struct FullState {
  VecD q, f, qdot, fdot;

  static FullState from_vector(const VecD& y, const Dims& dims);
  VecD to_vector() const;
};

// Every pointwise quantity at (x, f~).
struct GeometryPoint {
  FieldJets jets;
  MatD GH;
  BaseMetric base;
  ProjectorSet proj;
  BlockMetric block;
  ConnectionField conn;
  CurvatureField curv;
  CovariantD cov;
  ChristoffelSet chr;
  VecD grad_V;  // dV/dz^w
};

GeometryPoint geometry_point(const Model& model, const VecD& x, const VecD& f,
                             JetLevel level = JetLevel::reduced);

// Time derivative of the reduced state, in to_vector() order.
VecD reduced_rhs(const GeometryPoint& g, const Tensor3& c, const ReducedState& s);
VecD reduced_rhs(const Model& model, const ReducedState& s);
VecD reduced_rhs(const Model& model, const VecD& y);

// 1/2 zdot^T H zdot + 1/2 p^T d^-1 p + V.
double energy(const Model& model, const ReducedState& s);

// Euler-Lagrange equations of 1/2 |Ydot|^2_G - V on P x V.
VecD full_rhs(const Model& model, const FullState& s);
VecD full_rhs(const Model& model, const VecD& y);
double full_energy(const Model& model, const FullState& s);

// Gauge-fixes (Q, f), transports the velocity to the section by a^-1 and
// splits it into horizontal part and p = d A(velocity) = K~^T G velocity.
ReducedState project_full_state(const Model& model, const FullState& s);
// Full state on the section (a = e) that projects back to s.
FullState initial_lift(const Model& model, const ReducedState& s);
// g-translate of a full state, velocities pushed forward.
FullState translate(const Model& model, const FullState& s, const VecD& g);

}  // namespace lpr
