#include "fracdelay/map_model.hpp"

#include <cmath>

#include "fracdelay/errors.hpp"

namespace fracdelay {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Logistic: return "logistic";
    case MapKind::Cubic: return "cubic";
    case MapKind::Henon: return "henon";
    case MapKind::Lozi: return "lozi";
  }
  return "?";
}

MapKind parse_map_kind(std::string_view name) {
  if (name == "logistic") return MapKind::Logistic;
  if (name == "cubic") return MapKind::Cubic;
  if (name == "henon") return MapKind::Henon;
  if (name == "lozi") return MapKind::Lozi;
  throw DomainError("unknown map '" + std::string(name) + "' (expected logistic, cubic, henon, lozi)");
}

MapModel MapModel::from_parameter(MapKind kind, double param, double b) {
  switch (kind) {
    case MapKind::Logistic: return logistic(param);
    case MapKind::Cubic: return cubic(param);
    case MapKind::Henon: return henon(param, b);
    case MapKind::Lozi: return lozi(param, b);
  }
  throw DomainError("unknown map kind");
}

MapKind MapModel::kind() const noexcept {
  return std::visit(overloaded{[](const LogisticMap&) { return MapKind::Logistic; },
                               [](const CubicMap&) { return MapKind::Cubic; },
                               [](const HenonMap&) { return MapKind::Henon; },
                               [](const LoziMap&) { return MapKind::Lozi; }},
                    v_);
}

std::string MapModel::name() const { return std::string(to_string(kind())); }

double MapModel::eval(double x) const {
  return std::visit(overloaded{[x](const LogisticMap& m) { return m.lambda * x * (1.0 - x); },
                               [x](const CubicMap& m) { return m.beta * x * x * x + (1.0 - m.beta) * x; },
                               [x](const HenonMap& m) { return 1.0 - m.A * x * x; },
                               [x](const LoziMap& m) { return 1.0 - m.A * std::abs(x); }},
                    v_);
}

std::optional<double> MapModel::derivative(double x) const {
  return std::visit(
      overloaded{[x](const LogisticMap& m) -> std::optional<double> { return m.lambda * (1.0 - 2.0 * x); },
                 [x](const CubicMap& m) -> std::optional<double> { return 3.0 * m.beta * x * x + (1.0 - m.beta); },
                 [x](const HenonMap& m) -> std::optional<double> { return -2.0 * m.A * x; },
                 [x](const LoziMap& m) -> std::optional<double> {
                   if (x == 0.0) return std::nullopt;
                   return x > 0.0 ? -m.A : m.A;
                 }},
      v_);
}

std::optional<double> MapModel::delay_coefficient() const {
  return std::visit(overloaded{[](const LogisticMap&) -> std::optional<double> { return std::nullopt; },
                               [](const CubicMap&) -> std::optional<double> { return std::nullopt; },
                               [](const HenonMap& m) -> std::optional<double> { return m.B; },
                               [](const LoziMap& m) -> std::optional<double> { return m.B; }},
                    v_);
}

std::vector<std::pair<std::string, double>> MapModel::parameters() const {
  using Params = std::vector<std::pair<std::string, double>>;
  return std::visit(overloaded{[](const LogisticMap& m) { return Params{{"lambda", m.lambda}}; },
                               [](const CubicMap& m) { return Params{{"beta", m.beta}}; },
                               [](const HenonMap& m) { return Params{{"A", m.A}, {"B", m.B}}; },
                               [](const LoziMap& m) { return Params{{"A", m.A}, {"B", m.B}}; }},
                    v_);
}

}  // namespace fracdelay
