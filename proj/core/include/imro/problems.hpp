#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "imro/solver.hpp"

namespace imro {

enum class SignalType { kGaussian, kDynamicRange };

std::string to_string(SignalType type);
SignalType signal_type_from_string(const std::string& name);

struct GenOptions {
  std::int64_t sparsity = 0;  // nonzeros planted in the ground-truth signal
  SignalType x_type = SignalType::kGaussian;
  double decades = 3.0;  // dynamic range 10^decades for kDynamicRange
  double lambda = 0.1;
  std::uint64_t seed = 0;
  // Standard deviation of the additive Gaussian noise on b. Negative means
  // the default 1e-3 * ||A xhat|| / sqrt(m).
  double noise_level = -1.0;
  bool normalize_columns = false;
};

// Everything needed to reproduce and describe a generated instance. The
// resolved noise level (not the -1 sentinel) is recorded so instances are
// self-describing.
struct ProblemMetadata {
  std::string family;
  Index m = 0;
  Index n = 0;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::int64_t sparsity = 0;
  std::string x_type;
  double decades = 0.0;
  double noise_level = 0.0;
  bool normalize_columns = false;
  double cond = 0.0;          // conditioned family only
  double kernel_width = 0.0;  // convolution family only
};

struct ProblemBundle {
  BpdnProblem problem;
  Vector xhat;  // the planted signal; not the BPDN minimizer
  ProblemMetadata meta;
};

// Dense A with i.i.d. standard normal entries; ground truth with `sparsity`
// nonzeros on a uniformly random support, values Gaussian or log-uniform in
// magnitude over [1, 10^decades] with random signs; b = A xhat + noise.
// Requires sparsity <= n and m <= n.
ProblemBundle gen_gaussian(Index m, Index n, const GenOptions& options);

// A = first m rows of an orthogonal factor of a seeded Gaussian matrix,
// so A A^t = I_m.
ProblemBundle gen_orthonormal(Index m, Index n, const GenOptions& options);

// A = U diag(s) V^t with log-spaced singular values, s_max / s_min = cond.
ProblemBundle gen_conditioned(Index m, Index n, double cond,
                              const GenOptions& options);

// Implicit-operator families: cumulative-sum and circular-convolution
// instances on R^n. The convolution kernel is a circular Gaussian bump of
// the given width, normalized to unit sum.
ProblemBundle gen_heaviside(Index n, const GenOptions& options);
ProblemBundle gen_convolution(Index n, double kernel_width,
                              const GenOptions& options);

// On-disk format: a JSON manifest `<prefix>.json` naming dimensions, lambda,
// generator, seed and payload files; payloads are flat little-endian IEEE-754
// float64 arrays with no header (row-major for A). Implicit operators store
// only their parameters (plus the kernel payload for convolution). All file
// writes go through a temp file and an atomic rename.
//
// Returns the manifest path. Any x_star on the problem is saved too.
std::filesystem::path save_problem(const ProblemBundle& bundle,
                                   const std::filesystem::path& prefix);
ProblemBundle load_problem(const std::filesystem::path& manifest_path);

// Raw payload helpers (exposed for tests and external tooling).
void write_f64_payload(const std::filesystem::path& path, const double* data,
                       std::size_t count);
Vector read_f64_payload(const std::filesystem::path& path, Index expected);

}  // namespace imro
