#pragma once

#include <json.hpp>

#include "phyllo/colouring.hpp"
#include "phyllo/contfrac.hpp"
#include "phyllo/fitgeo.hpp"
#include "phyllo/hyperbolic.hpp"
#include "phyllo/linearize.hpp"
#include "phyllo/parastichy.hpp"
#include "phyllo/voronoi.hpp"

namespace phyllo {

inline nlohmann::json to_json(const hyperbolic::HPoint& z) {
  return {{"x", z.x}, {"y", z.y}};
}

inline nlohmann::json to_json(const hyperbolic::MobiusMap& g) {
  return {{"a", g.a}, {"b", g.b}, {"c", g.c}, {"d", g.d}};
}

inline nlohmann::json to_json(const hyperbolic::ModularMap& g) {
  return {{"a", g.a}, {"b", g.b}, {"c", g.c}, {"d", g.d}};
}

inline nlohmann::json to_json(const hyperbolic::GeodesicArc& arc) {
  if (arc.kind == hyperbolic::GeodesicArc::Kind::Vertical)
    return {{"kind", "vertical"}, {"x0", arc.x0}};
  return {{"kind", "circle"}, {"center", arc.center}, {"radius", arc.radius}};
}

inline nlohmann::json to_json(const linearize::LinearModel& m) {
  return {{"j", m.j},
          {"q_jm1", m.q_jm1},
          {"q_j", m.q_j},
          {"basis",
           {{"v1", {m.basis.v1.real(), m.basis.v1.imag()}},
            {"v2", {m.basis.v2.real(), m.basis.v2.imag()}},
            {"step1", m.basis.step1},
            {"step2", m.basis.step2},
            {"orientation", m.basis.orientation}}},
          {"det", m.basis.det()}};
}

inline nlohmann::json to_json(const parastichy::ParastichyReport& r) {
  return {{"radius", r.radius},
          {"primary_count", r.primary_count},
          {"secondary_count", r.secondary_count},
          {"primary_step", r.primary_step},
          {"secondary_step", r.secondary_step},
          {"primary_chirality", r.primary_chirality},
          {"secondary_chirality", r.secondary_chirality},
          {"ambiguous", r.ambiguous}};
}

inline nlohmann::json to_json(const parastichy::TransitionEvent& e) {
  return {{"t", e.t},
          {"radius", e.radius()},
          {"kind", e.kind == parastichy::TransitionEvent::Kind::I ? "I" : "II"}};
}

inline nlohmann::json to_json(const voronoi::AreaStats& st) {
  return {{"mean", st.mean}, {"max_dev", st.max_dev}, {"count", st.count}};
}

inline nlohmann::json to_json(const fitgeo::FitResult& f) {
  return {{"A", {f.A.real(), f.A.imag()}},
          {"C", {f.C.real(), f.C.imag()}},
          {"theta", f.theta},
          {"gamma", f.gamma},
          {"rms_residual", f.rms_residual},
          {"converged", f.converged},
          {"iterations", f.iterations}};
}

inline nlohmann::json to_json(const fitgeo::GeodesicFit& f) {
  return {{"arc", to_json(f.arc)},
          {"mean_residual", f.mean_residual},
          {"max_residual", f.max_residual},
          {"endpoints", {f.endpoint_lo, f.endpoint_hi}}};
}

}  // namespace phyllo
