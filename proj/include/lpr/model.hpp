#pragma once

#include <memory>
#include <random>
#include <string>

#include "lpr/algebra.hpp"
#include "lpr/dual.hpp"
#include "lpr/linalg.hpp"

namespace lpr {

// Dimensions of P, G, V. Block ("tilde") indices on P x V run over the n_p
// P-coordinates first, then the n_v V-coordinates. Reduced coordinates
// z = (x, f~) run over the n_x base coordinates first.
struct Dims {
  int n_p = 0;
  int n_g = 0;
  int n_v = 0;
  int n_x() const { return n_p - n_g; }
  int n_t() const { return n_p + n_v; }
  int n_z() const { return n_x() + n_v; }
};

// Smooth model maps at one scalar type.
template <class S>
class ModelMaps {
 public:
  virtual ~ModelMaps() = default;
  // G_AB(Q), symmetric positive definite.
  virtual Mat<S> metric_p(const Vec<S>& q) const = 0;
  // G_ab(f).
  virtual Mat<S> metric_v(const Vec<S>& f) const = 0;
  // K^A_alpha(Q), n_p x n_g.
  virtual Mat<S> killing_p(const Vec<S>& q) const = 0;
  // K^a_alpha(f), n_v x n_g.
  virtual Mat<S> killing_v(const Vec<S>& f) const = 0;
  // chi^alpha(Q).
  virtual Vec<S> gauge(const Vec<S>& q) const = 0;
  // Q*(x).
  virtual Vec<S> section(const Vec<S>& x) const = 0;
  // G-invariant potential V(Q, f).
  virtual S potential(const Vec<S>& q, const Vec<S>& f) const = 0;
};

// Geometric data of a mechanical system on P x V with a free isometric
// G-action. The metric on P x V is block diagonal (no P-V cross terms).
// Instances are immutable after construction and shareable across threads.
class Model : public ModelMaps<double>,
              public ModelMaps<D1>,
              public ModelMaps<D2>,
              public ModelMaps<D3> {
 public:
  template <class S>
  const ModelMaps<S>& maps() const {
    return *this;
  }

  virtual std::string name() const = 0;
  virtual Dims dims() const = 0;
  virtual const LieData& lie() const = 0;
  virtual const GroupChart& chart() const = 0;

  // Left action F(Q, a) and its pushforward on tangent vectors.
  virtual VecD act_p(const VecD& q, const VecD& a) const = 0;
  virtual VecD act_v(const VecD& f, const VecD& a) const = 0;
  virtual VecD push_p(const VecD& q, const VecD& a, const VecD& qdot) const = 0;
  virtual VecD push_v(const VecD& f, const VecD& a, const VecD& fdot) const = 0;

  // Initial guess for x with Q*(x) = q_sigma (q_sigma on the section).
  virtual VecD section_guess(const VecD& q_sigma) const = 0;
  virtual bool in_section_domain(const VecD& x) const = 0;
  // Throws GaugeError where the gauge functions are not defined.
  virtual void check_gauge_domain(const VecD& q) const { (void)q; }
  // Re-expresses (q, qdot) in an equivalent chart when q nears the chart edge.
  virtual void recenter(VecD& q, VecD& qdot) const {
    (void)q;
    (void)qdot;
  }

  // Sampling region for verification suites.
  virtual VecD sample_base(std::mt19937_64& rng) const = 0;
  virtual VecD sample_fiber(std::mt19937_64& rng) const = 0;
  virtual VecD sample_group(std::mt19937_64& rng) const = 0;
  // Default initial reduced state ordered (x, f~, xdot, f~dot, p).
  virtual VecD default_initial_state() const = 0;
};

// Forwards every ModelMaps overload to the templates of `Impl`:
// metric_p_t<S>, metric_v_t<S>, killing_p_t<S>, killing_v_t<S>, gauge_t<S>,
// section_t<S>, potential_t<S>.
template <class Impl>
class ModelAdapter : public Model {
 private:
  const Impl& impl() const { return static_cast<const Impl&>(*this); }

 public:
#define LPR_FORWARD_MAPS(S)                                                                       \
  Mat<S> metric_p(const Vec<S>& q) const override { return impl().template metric_p_t<S>(q); }   \
  Mat<S> metric_v(const Vec<S>& f) const override { return impl().template metric_v_t<S>(f); }   \
  Mat<S> killing_p(const Vec<S>& q) const override { return impl().template killing_p_t<S>(q); } \
  Mat<S> killing_v(const Vec<S>& f) const override { return impl().template killing_v_t<S>(f); } \
  Vec<S> gauge(const Vec<S>& q) const override { return impl().template gauge_t<S>(q); }         \
  Vec<S> section(const Vec<S>& x) const override { return impl().template section_t<S>(x); }     \
  S potential(const Vec<S>& q, const Vec<S>& f) const override {                                  \
    return impl().template potential_t<S>(q, f);                                                  \
  }
  LPR_FORWARD_MAPS(double)
  LPR_FORWARD_MAPS(D1)
  LPR_FORWARD_MAPS(D2)
  LPR_FORWARD_MAPS(D3)
#undef LPR_FORWARD_MAPS
};

}  // namespace lpr
