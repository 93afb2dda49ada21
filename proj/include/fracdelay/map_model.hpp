#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fracdelay {

struct LogisticMap {
  double lambda;
};
struct CubicMap {
  double beta;
};
/// 1 - A x^2; B is the delay coefficient of the planar map's 1-D delayed form.
struct HenonMap {
  double A;
  double B;
};
struct LoziMap {
  double A;
  double B;
};

enum class MapKind { Logistic, Cubic, Henon, Lozi };

std::string_view to_string(MapKind kind);
/// Throws DomainError for unknown names.
MapKind parse_map_kind(std::string_view name);

/// One of the nonlinear maps f whose delayed fractional iteration is studied.
class MapModel {
 public:
  using Variant = std::variant<LogisticMap, CubicMap, HenonMap, LoziMap>;

  MapModel(Variant v) : v_(v) {}  // NOLINT(google-explicit-constructor)

  static MapModel logistic(double lambda) { return MapModel(LogisticMap{lambda}); }
  static MapModel cubic(double beta) { return MapModel(CubicMap{beta}); }
  static MapModel henon(double A, double B) { return MapModel(HenonMap{A, B}); }
  static MapModel lozi(double A, double B) { return MapModel(LoziMap{A, B}); }

  /// Builds the map of `kind` with its sweep parameter set to `param`
  /// (lambda, beta, or A).  `b` fills B for Henon and Lozi.
  static MapModel from_parameter(MapKind kind, double param, double b);

  MapKind kind() const noexcept;
  std::string name() const;

  double eval(double x) const;
  /// f'(x); empty where f is not differentiable (Lozi at 0).
  std::optional<double> derivative(double x) const;

  /// B for the planar maps, empty otherwise.
  std::optional<double> delay_coefficient() const;

  /// Named parameters, in declaration order.
  std::vector<std::pair<std::string, double>> parameters() const;

  const Variant& variant() const noexcept { return v_; }

 private:
  Variant v_;
};

}  // namespace fracdelay
