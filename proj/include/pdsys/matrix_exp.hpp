#pragma once

#include "pdsys/types.hpp"

namespace pdsys {

/// exp(a) by Padé scaling and squaring.
CMat expm(const CMat& a);

/// Propagator t ↦ exp(−tK) for a fixed K. Uses K = VΛV⁻¹ when cond(V) is
/// below max_condition, otherwise scaling and squaring at every call.
class Propagator {
 public:
  explicit Propagator(const CMat& k, double max_condition = 1e3);

  CMat at(double t) const;
  CVec apply(double t, const CVec& v) const;
  bool diagonalized() const { return diagonalized_; }
  const CMat& generator() const { return k_; }

 private:
  CMat k_;
  bool diagonalized_ = false;
  CMat v_;
  CMat v_inv_;
  CVec lambda_;
};

}  // namespace pdsys
