#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace helix {

using Complex = std::complex<double>;

/// Raised when a solver cannot meet its contract (CFL, residual, ...).
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double value)
      : std::runtime_error(what), value_(value) {}
  double value() const { return value_; }

 private:
  double value_;
};

/// Polar tensor grid on the unit disk, staggered in r.
class DiskGrid {
 public:
  DiskGrid(int n_r, int n_theta);
  ~DiskGrid();
  DiskGrid(const DiskGrid&) = delete;
  DiskGrid& operator=(const DiskGrid&) = delete;

  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  /// number of stored modes m = 0 .. n_theta/2
  int n_modes() const { return n_theta_ / 2 + 1; }
  int size() const { return n_r_ * n_theta_; }
  int mode_size() const { return n_r_ * n_modes(); }
  double dr() const { return dr_; }
  double r(int j) const { return r_[j]; }
  double theta(int k) const { return theta_[k]; }
  const std::vector<double>& radii() const { return r_; }
  /// area weight of any node on ring j
  double weight(int j) const { return w_[j]; }
  double y1(int j, int k) const { return r_[j] * cos_[k]; }
  double y2(int j, int k) const { return r_[j] * sin_[k]; }
  double cos_theta(int k) const { return cos_[k]; }
  double sin_theta(int k) const { return sin_[k]; }

  /// ring-wise r2c, divides by n_theta
  void forward(const double* in, Complex* out) const;
  /// ring-wise c2r, no scaling
  void inverse(const Complex* in, double* out) const;

 private:
  int n_r_;
  int n_theta_;
  double dr_;
  std::vector<double> r_, theta_, w_, cos_, sin_;
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
};

using GridPtr = std::shared_ptr<const DiskGrid>;

GridPtr build_grid(int n_r, int n_theta);

enum class Representation { physical, modes };
enum class Direction { forward, inverse };

/// Scalar samples on a DiskGrid, physical (n_r x n_theta, ring-major)
/// or azimuthal modes (n_r x (n_theta/2+1)).
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(GridPtr grid, Representation rep = Representation::physical);

  const DiskGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Representation representation() const { return rep_; }
  bool empty() const { return !grid_; }

  double& operator()(int j, int k);
  double operator()(int j, int k) const;
  Complex& mode(int j, int m);
  /// accepts negative m through conjugate symmetry
  Complex mode(int j, int m) const;

  std::span<double> values();
  std::span<const double> values() const;
  std::span<Complex> coefficients();
  std::span<const Complex> coefficients() const;

  ScalarField to_modes() const;
  ScalarField to_physical() const;

  ScalarField& operator+=(const ScalarField& o);
  ScalarField& operator-=(const ScalarField& o);
  ScalarField& operator*=(double a);
  /// this += a * o
  ScalarField& axpy(double a, const ScalarField& o);

 private:
  void require(Representation rep) const;
  void check_same(const ScalarField& o) const;

  GridPtr grid_;
  Representation rep_ = Representation::physical;
  std::vector<double> phys_;
  std::vector<Complex> modes_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// pointwise product (physical)
ScalarField multiply(const ScalarField& a, const ScalarField& b);

/// samples f(y1, y2) at every node
ScalarField sample(const GridPtr& grid, const std::function<double(double, double)>& f);

struct VectorField3 {
  ScalarField w1, w2, w3;

  VectorField3() = default;
  explicit VectorField3(const GridPtr& grid);
  VectorField3(ScalarField a, ScalarField b, ScalarField c);

  const DiskGrid& grid() const { return w1.grid(); }
  const GridPtr& grid_ptr() const { return w1.grid_ptr(); }
  ScalarField& operator[](int i);
  const ScalarField& operator[](int i) const;

  VectorField3& operator+=(const VectorField3& o);
  VectorField3& operator-=(const VectorField3& o);
  VectorField3& operator*=(double a);
  VectorField3& axpy(double a, const VectorField3& o);
};

VectorField3 operator+(VectorField3 a, const VectorField3& b);
VectorField3 operator-(VectorField3 a, const VectorField3& b);
VectorField3 operator*(double s, VectorField3 a);

double l2_inner(const ScalarField& f, const ScalarField& g);
double l2_inner(const VectorField3& f, const VectorField3& g);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField3& f);
/// p in [1, inf]; p = inf gives the max over nodes
double lp_norm(const ScalarField& f, double p);
double max_abs(const VectorField3& f);
/// quadrature mean over the disk
double mean(const ScalarField& f);

ScalarField azimuthal_transform(const ScalarField& f, Direction direction);

}  // namespace helix
