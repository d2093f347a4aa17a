#pragma once

#include <span>
#include <string>
#include <vector>

namespace freeze {

enum class RootKind { A, B, D };

std::string to_string(RootKind kind);
RootKind parse_root_kind(const std::string& text);

// Root system, particle count and multiplicities.
//
// `k` is the multiplicity attached to the pair roots e_i - e_j (and e_i + e_j
// for B and D). `k_wall` is the multiplicity of the short roots e_i, used only
// by the B system. For B the usual (k1, k2) naming maps to (k_wall, k).
class RootSystemSpec {
 public:
  static RootSystemSpec A(int n, double k);
  static RootSystemSpec B(int n, double k1, double k2);
  static RootSystemSpec D(int n, double k);

  RootKind kind() const { return kind_; }
  int n() const { return n_; }
  double k() const { return k_; }
  double k1() const { return k_wall_; }
  double k2() const { return k_; }

  // Degree gamma with w_k(c y) = c^{2 gamma} w_k(y).
  double homogeneity_degree() const;

  std::string describe() const;

  bool operator==(const RootSystemSpec&) const = default;

 private:
  RootSystemSpec(RootKind kind, int n, double k, double k_wall);

  RootKind kind_;
  int n_;
  double k_;
  double k_wall_;
};

bool in_chamber(RootKind kind, std::span<const double> y);

// A coordinate vector inside the closed Weyl chamber of its root system.
class ChamberPoint {
 public:
  // Throws InvalidArgument when `coords` is not in the chamber.
  ChamberPoint(RootKind kind, std::vector<double> coords);

  RootKind kind() const { return kind_; }
  std::size_t size() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  RootKind kind_;
  std::vector<double> coords_;
};

// log w_k(y); -infinity on walls where the weight vanishes.
double log_weight(const RootSystemSpec& spec, const ChamberPoint& y);
// Same without chamber/dimension validation, for inner loops.
double log_weight_unchecked(const RootSystemSpec& spec,
                            std::span<const double> y);

// W_A(y) = 2 sum ln(y_i - y_j) - |y|^2/2,
// W_B(y) = 2 sum ln(y_i^2 - y_j^2) + 2 nu sum ln y_i - |y|^2/2,
// W_D(y) = 2 sum ln(y_i^2 - y_j^2) - |y|^2/2.
// `nu` is only read for B.
double freezing_potential(RootKind kind, std::span<const double> y,
                          double nu = 0.0);
double freezing_potential(const ChamberPoint& y, double nu = 0.0);

// Image of v under the Weyl group element that maps it into the chamber.
ChamberPoint project_to_chamber(RootKind kind, std::span<const double> v);
void project_in_place(RootKind kind, std::span<double> v);

}  // namespace freeze
