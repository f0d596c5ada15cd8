#include "helix/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace helix {

namespace {
// the fftw planner is not reentrant
std::mutex planner_mutex;
}  // namespace

DiskGrid::DiskGrid(int n_r, int n_theta) : n_r_(n_r), n_theta_(n_theta), dr_(1.0 / n_r) {
  if (n_r < 8 || n_theta < 8) throw std::invalid_argument("build_grid: n_r and n_theta must be >= 8");
  if (n_theta % 2 != 0) throw std::invalid_argument("build_grid: n_theta must be even");
  const double pi = std::numbers::pi;
  r_.resize(n_r);
  w_.resize(n_r);
  for (int j = 0; j < n_r; ++j) {
    r_[j] = (j + 0.5) * dr_;
    w_[j] = r_[j] * dr_ * 2.0 * pi / n_theta;
  }
  theta_.resize(n_theta);
  cos_.resize(n_theta);
  sin_.resize(n_theta);
  for (int k = 0; k < n_theta; ++k) {
    theta_[k] = 2.0 * pi * k / n_theta;
    cos_[k] = std::cos(theta_[k]);
    sin_[k] = std::sin(theta_[k]);
  }

  std::vector<double> rbuf(size());
  std::vector<Complex> cbuf(mode_size());
  auto* cb = reinterpret_cast<fftw_complex*>(cbuf.data());
  int n[] = {n_theta};
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard<std::mutex> lock(planner_mutex);
  plan_fwd_ = fftw_plan_many_dft_r2c(1, n, n_r, rbuf.data(), nullptr, 1, n_theta, cb, nullptr, 1,
                                     n_modes(), flags);
  plan_inv_ = fftw_plan_many_dft_c2r(1, n, n_r, cb, nullptr, 1, n_modes(), rbuf.data(), nullptr, 1,
                                     n_theta, flags);
}

DiskGrid::~DiskGrid() {
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void DiskGrid::forward(const double* in, Complex* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
  const double s = 1.0 / n_theta_;
  for (int i = 0; i < mode_size(); ++i) out[i] *= s;
}

void DiskGrid::inverse(const Complex* in, double* out) const {
  // c2r overwrites its input
  std::vector<Complex> tmp(in, in + mode_size());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_inv_), reinterpret_cast<fftw_complex*>(tmp.data()),
                       out);
}

GridPtr build_grid(int n_r, int n_theta) { return std::make_shared<const DiskGrid>(n_r, n_theta); }

// ---- ScalarField

ScalarField::ScalarField(GridPtr grid, Representation rep) : grid_(std::move(grid)), rep_(rep) {
  if (!grid_) throw std::invalid_argument("ScalarField: null grid");
  if (rep_ == Representation::physical)
    phys_.assign(grid_->size(), 0.0);
  else
    modes_.assign(grid_->mode_size(), Complex(0.0));
}

void ScalarField::require(Representation rep) const {
  if (rep_ != rep) throw std::logic_error("ScalarField: representation mismatch");
}

void ScalarField::check_same(const ScalarField& o) const {
  if (grid_ != o.grid_) throw std::invalid_argument("ScalarField: grid mismatch");
  if (rep_ != o.rep_) throw std::logic_error("ScalarField: representation mismatch");
}

double& ScalarField::operator()(int j, int k) {
  require(Representation::physical);
  return phys_[j * grid_->n_theta() + k];
}

double ScalarField::operator()(int j, int k) const {
  require(Representation::physical);
  return phys_[j * grid_->n_theta() + k];
}

Complex& ScalarField::mode(int j, int m) {
  require(Representation::modes);
  if (m < 0) throw std::out_of_range("ScalarField::mode: negative m is read-only");
  return modes_[j * grid_->n_modes() + m];
}

Complex ScalarField::mode(int j, int m) const {
  require(Representation::modes);
  if (m < 0) return std::conj(modes_[j * grid_->n_modes() - m]);
  return modes_[j * grid_->n_modes() + m];
}

std::span<double> ScalarField::values() {
  require(Representation::physical);
  return phys_;
}
std::span<const double> ScalarField::values() const {
  require(Representation::physical);
  return phys_;
}
std::span<Complex> ScalarField::coefficients() {
  require(Representation::modes);
  return modes_;
}
std::span<const Complex> ScalarField::coefficients() const {
  require(Representation::modes);
  return modes_;
}

ScalarField ScalarField::to_modes() const {
  if (rep_ == Representation::modes) return *this;
  ScalarField out(grid_, Representation::modes);
  grid_->forward(phys_.data(), out.modes_.data());
  return out;
}

ScalarField ScalarField::to_physical() const {
  if (rep_ == Representation::physical) return *this;
  ScalarField out(grid_, Representation::physical);
  grid_->inverse(modes_.data(), out.phys_.data());
  return out;
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
  check_same(o);
  for (size_t i = 0; i < phys_.size(); ++i) phys_[i] += o.phys_[i];
  for (size_t i = 0; i < modes_.size(); ++i) modes_[i] += o.modes_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
  check_same(o);
  for (size_t i = 0; i < phys_.size(); ++i) phys_[i] -= o.phys_[i];
  for (size_t i = 0; i < modes_.size(); ++i) modes_[i] -= o.modes_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (auto& v : phys_) v *= a;
  for (auto& v : modes_) v *= a;
  return *this;
}

ScalarField& ScalarField::axpy(double a, const ScalarField& o) {
  check_same(o);
  for (size_t i = 0; i < phys_.size(); ++i) phys_[i] += a * o.phys_[i];
  for (size_t i = 0; i < modes_.size(); ++i) modes_[i] += a * o.modes_[i];
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField multiply(const ScalarField& a, const ScalarField& b) {
  ScalarField pa = a.to_physical();
  ScalarField pb = b.to_physical();
  if (&pa.grid() != &pb.grid()) throw std::invalid_argument("multiply: grid mismatch");
  auto va = pa.values();
  auto vb = pb.values();
  for (size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
  return pa;
}

ScalarField sample(const GridPtr& grid, const std::function<double(double, double)>& f) {
  ScalarField out(grid);
  for (int j = 0; j < grid->n_r(); ++j)
    for (int k = 0; k < grid->n_theta(); ++k) out(j, k) = f(grid->y1(j, k), grid->y2(j, k));
  return out;
}

// ---- VectorField3

VectorField3::VectorField3(const GridPtr& grid) : w1(grid), w2(grid), w3(grid) {}

VectorField3::VectorField3(ScalarField a, ScalarField b, ScalarField c)
    : w1(std::move(a)), w2(std::move(b)), w3(std::move(c)) {
  if (w1.grid_ptr() != w2.grid_ptr() || w1.grid_ptr() != w3.grid_ptr())
    throw std::invalid_argument("VectorField3: components on different grids");
}

ScalarField& VectorField3::operator[](int i) { return i == 0 ? w1 : (i == 1 ? w2 : w3); }
const ScalarField& VectorField3::operator[](int i) const { return i == 0 ? w1 : (i == 1 ? w2 : w3); }

VectorField3& VectorField3::operator+=(const VectorField3& o) {
  for (int i = 0; i < 3; ++i) (*this)[i] += o[i];
  return *this;
}
VectorField3& VectorField3::operator-=(const VectorField3& o) {
  for (int i = 0; i < 3; ++i) (*this)[i] -= o[i];
  return *this;
}
VectorField3& VectorField3::operator*=(double a) {
  for (int i = 0; i < 3; ++i) (*this)[i] *= a;
  return *this;
}
VectorField3& VectorField3::axpy(double a, const VectorField3& o) {
  for (int i = 0; i < 3; ++i) (*this)[i].axpy(a, o[i]);
  return *this;
}

VectorField3 operator+(VectorField3 a, const VectorField3& b) { return a += b; }
VectorField3 operator-(VectorField3 a, const VectorField3& b) { return a -= b; }
VectorField3 operator*(double s, VectorField3 a) { return a *= s; }

// ---- norms

double l2_inner(const ScalarField& f, const ScalarField& g) {
  if (f.grid_ptr() != g.grid_ptr()) throw std::invalid_argument("l2_inner: grid mismatch");
  const ScalarField pf = f.to_physical();
  const ScalarField pg = g.to_physical();
  const DiskGrid& grid = f.grid();
  double total = 0.0;
  for (int j = 0; j < grid.n_r(); ++j) {
    double ring = 0.0;
    for (int k = 0; k < grid.n_theta(); ++k) ring += pf(j, k) * pg(j, k);
    total += grid.weight(j) * ring;
  }
  return total;
}

double l2_inner(const VectorField3& f, const VectorField3& g) {
  return l2_inner(f.w1, g.w1) + l2_inner(f.w2, g.w2) + l2_inner(f.w3, g.w3);
}

double l2_norm(const ScalarField& f) { return std::sqrt(std::max(0.0, l2_inner(f, f))); }
double l2_norm(const VectorField3& f) { return std::sqrt(std::max(0.0, l2_inner(f, f))); }

double lp_norm(const ScalarField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const ScalarField pf = f.to_physical();
  const DiskGrid& grid = f.grid();
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : pf.values()) m = std::max(m, std::abs(v));
    return m;
  }
  double total = 0.0;
  for (int j = 0; j < grid.n_r(); ++j) {
    double ring = 0.0;
    for (int k = 0; k < grid.n_theta(); ++k) ring += std::pow(std::abs(pf(j, k)), p);
    total += grid.weight(j) * ring;
  }
  return std::pow(total, 1.0 / p);
}

double max_abs(const VectorField3& f) {
  const DiskGrid& g = f.grid();
  VectorField3 p(f.w1.to_physical(), f.w2.to_physical(), f.w3.to_physical());
  double m = 0.0;
  for (int j = 0; j < g.n_r(); ++j)
    for (int k = 0; k < g.n_theta(); ++k)
      m = std::max(m, std::hypot(p.w1(j, k), p.w2(j, k), p.w3(j, k)));
  return m;
}

double mean(const ScalarField& f) {
  const ScalarField pf = f.to_physical();
  const DiskGrid& grid = f.grid();
  double total = 0.0, area = 0.0;
  for (int j = 0; j < grid.n_r(); ++j)
    for (int k = 0; k < grid.n_theta(); ++k) {
      total += grid.weight(j) * pf(j, k);
      area += grid.weight(j);
    }
  return total / area;
}

ScalarField azimuthal_transform(const ScalarField& f, Direction direction) {
  if (direction == Direction::forward) {
    if (f.representation() != Representation::physical)
      throw std::logic_error("azimuthal_transform: forward needs a physical field");
    return f.to_modes();
  }
  if (f.representation() != Representation::modes)
    throw std::logic_error("azimuthal_transform: inverse needs a mode field");
  return f.to_physical();
}

}  // namespace helix
