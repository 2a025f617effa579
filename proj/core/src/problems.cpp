#include "imro/problems.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/QR>

#include <nlohmann/json.hpp>

namespace imro {

namespace {

using nlohmann::json;

void validate_common(Index m, Index n, const GenOptions& opt) {
  if (m < 1 || n < 1) {
    throw std::invalid_argument("generator: dimensions must be positive");
  }
  if (opt.sparsity < 0 || opt.sparsity > n) {
    throw std::invalid_argument("generator: sparsity must lie in [0, n]");
  }
  if (!(opt.lambda > 0.0)) {
    throw std::invalid_argument("generator: lambda must be positive");
  }
  if (opt.x_type == SignalType::kDynamicRange && !(opt.decades >= 0.0)) {
    throw std::invalid_argument("generator: decades must be nonnegative");
  }
}

// Ground-truth signal with `sparsity` nonzeros on random support. Draw order
// is fixed (support first, then values) so instances are reproducible.
Vector draw_signal(Index n, const GenOptions& opt, std::mt19937_64& rng) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::shuffle(idx.begin(), idx.end(), rng);

  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  Vector xhat = Vector::Zero(n);
  for (std::int64_t j = 0; j < opt.sparsity; ++j) {
    const Index i = idx[static_cast<std::size_t>(j)];
    if (opt.x_type == SignalType::kGaussian) {
      xhat[i] = gauss(rng);
    } else {
      // Log-uniform magnitudes over [10^-decades, 1]: dynamic range (the
      // ratio of largest to smallest nonzero) is 10^decades at unit scale.
      const double magnitude = std::pow(10.0, -uni(rng) * opt.decades);
      const double sign = uni(rng) < 0.5 ? -1.0 : 1.0;
      xhat[i] = sign * magnitude;
    }
  }
  return xhat;
}

// b = A xhat + noise, resolving the default noise level from ||A xhat||.
Vector add_observation_noise(const Vector& ax, Index m, GenOptions& opt,
                             std::mt19937_64& rng) {
  if (opt.noise_level < 0.0) {
    opt.noise_level = 1e-3 * ax.norm() / std::sqrt(static_cast<double>(m));
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector b = ax;
  if (opt.noise_level > 0.0) {
    for (Index i = 0; i < m; ++i) b[i] += opt.noise_level * gauss(rng);
  }
  return b;
}

ProblemMetadata make_meta(const std::string& family, Index m, Index n,
                          const GenOptions& opt) {
  ProblemMetadata meta;
  meta.family = family;
  meta.m = m;
  meta.n = n;
  meta.lambda = opt.lambda;
  meta.seed = opt.seed;
  meta.sparsity = opt.sparsity;
  meta.x_type = to_string(opt.x_type);
  meta.decades = opt.x_type == SignalType::kDynamicRange ? opt.decades : 0.0;
  meta.noise_level = opt.noise_level;
  meta.normalize_columns = opt.normalize_columns;
  return meta;
}

ProblemBundle finish_dense(Matrix A, const std::string& family, Index m,
                           Index n, GenOptions opt, std::mt19937_64& rng,
                           double cond = 0.0) {
  if (opt.normalize_columns) {
    for (Index j = 0; j < n; ++j) {
      const double norm = A.col(j).norm();
      if (norm > 0.0) A.col(j) /= norm;
    }
  }
  Vector xhat = draw_signal(n, opt, rng);
  const Vector ax = A * xhat;
  const Vector b = add_observation_noise(ax, m, opt, rng);
  auto op = std::make_shared<DenseOperator>(std::move(A));
  ProblemMetadata meta = make_meta(family, m, n, opt);
  meta.cond = cond;
  return ProblemBundle{BpdnProblem(std::move(op), b, opt.lambda), std::move(xhat),
                       std::move(meta)};
}

Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix A(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      A(i, j) = gauss(rng);
    }
  }
  return A;
}

// Thin orthonormal factor (orthonormal columns) of a seeded Gaussian matrix.
Matrix orthonormal_columns(Index rows, Index cols, std::mt19937_64& rng) {
  const Matrix G = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

}  // namespace

std::string to_string(SignalType type) {
  return type == SignalType::kGaussian ? "gaussian" : "dynamic";
}

SignalType signal_type_from_string(const std::string& name) {
  if (name == "gaussian") return SignalType::kGaussian;
  if (name == "dynamic") return SignalType::kDynamicRange;
  throw std::invalid_argument("unknown signal type: " + name);
}

ProblemBundle gen_gaussian(Index m, Index n, const GenOptions& options) {
  validate_common(m, n, options);
  if (m > n) {
    throw std::invalid_argument("gen_gaussian: requires m <= n");
  }
  GenOptions opt = options;
  std::mt19937_64 rng(opt.seed);
  Matrix A = gaussian_matrix(m, n, rng);
  return finish_dense(std::move(A), "gaussian", m, n, opt, rng);
}

ProblemBundle gen_orthonormal(Index m, Index n, const GenOptions& options) {
  validate_common(m, n, options);
  if (m > n) {
    throw std::invalid_argument("gen_orthonormal: requires m <= n");
  }
  GenOptions opt = options;
  std::mt19937_64 rng(opt.seed);
  // Rows of A are the first m columns of the orthogonal factor, transposed.
  Matrix A = orthonormal_columns(n, m, rng).transpose();
  return finish_dense(std::move(A), "orthonormal", m, n, opt, rng);
}

ProblemBundle gen_conditioned(Index m, Index n, double cond,
                              const GenOptions& options) {
  validate_common(m, n, options);
  if (!(cond >= 1.0)) {
    throw std::invalid_argument("gen_conditioned: cond must be >= 1");
  }
  GenOptions opt = options;
  std::mt19937_64 rng(opt.seed);
  const Index r = std::min(m, n);
  const Matrix U = orthonormal_columns(m, r, rng);
  const Matrix V = orthonormal_columns(n, r, rng);
  // Log-spaced spectrum with the top singular value at Gaussian-matrix scale,
  // so lambda values carry over between the gaussian and conditioned families.
  const double top = std::sqrt(static_cast<double>(m)) +
                     std::sqrt(static_cast<double>(n));
  Vector s(r);
  for (Index i = 0; i < r; ++i) {
    const double frac = r > 1 ? static_cast<double>(i) / (r - 1) : 0.0;
    s[i] = top * std::pow(cond, -frac);
  }
  Matrix A = U * s.asDiagonal() * V.transpose();
  return finish_dense(std::move(A), "conditioned", m, n, opt, rng, cond);
}

ProblemBundle gen_heaviside(Index n, const GenOptions& options) {
  validate_common(n, n, options);
  GenOptions opt = options;
  std::mt19937_64 rng(opt.seed);
  auto op = std::make_shared<HeavisideOperator>(n);
  Vector xhat = draw_signal(n, opt, rng);
  const Vector ax = op->apply(xhat);
  const Vector b = add_observation_noise(ax, n, opt, rng);
  op->reset_counts();
  ProblemMetadata meta = make_meta("heaviside", n, n, opt);
  return ProblemBundle{BpdnProblem(std::move(op), b, opt.lambda),
                       std::move(xhat), std::move(meta)};
}

ProblemBundle gen_convolution(Index n, double kernel_width,
                              const GenOptions& options) {
  validate_common(n, n, options);
  if (!(kernel_width > 0.0)) {
    throw std::invalid_argument("gen_convolution: kernel width must be > 0");
  }
  GenOptions opt = options;
  std::mt19937_64 rng(opt.seed);

  // Circular Gaussian blur kernel, unit sum.
  Vector kernel = Vector::Zero(n);
  const Index reach = std::min<Index>(
      n / 2, static_cast<Index>(std::ceil(3.0 * kernel_width)));
  double sum = 0.0;
  for (Index o = -reach; o <= reach; ++o) {
    const double w =
        std::exp(-0.5 * (o / kernel_width) * (o / kernel_width));
    Index i = o >= 0 ? o : o + n;
    kernel[i] += w;
    sum += w;
  }
  kernel /= sum;

  auto op = std::make_shared<ConvolutionOperator>(kernel);
  Vector xhat = draw_signal(n, opt, rng);
  const Vector ax = op->apply(xhat);
  const Vector b = add_observation_noise(ax, n, opt, rng);
  op->reset_counts();
  ProblemMetadata meta = make_meta("convolution", n, n, opt);
  meta.kernel_width = kernel_width;
  return ProblemBundle{BpdnProblem(std::move(op), b, opt.lambda),
                       std::move(xhat), std::move(meta)};
}

void write_f64_payload(const std::filesystem::path& path, const double* data,
                       std::size_t count) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + tmp.string());
    }
    std::vector<unsigned char> buf(count * 8);
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t bits;
      std::memcpy(&bits, &data[i], sizeof bits);
      for (int byte = 0; byte < 8; ++byte) {
        buf[i * 8 + byte] =
            static_cast<unsigned char>((bits >> (8 * byte)) & 0xffu);
      }
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) {
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

Vector read_f64_payload(const std::filesystem::path& path, Index expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open payload: " + path.string());
  }
  const auto size = std::filesystem::file_size(path);
  if (size != static_cast<std::uintmax_t>(expected) * 8) {
    throw std::runtime_error("payload " + path.string() +
                             " has wrong size: expected " +
                             std::to_string(expected * 8) + " bytes, got " +
                             std::to_string(size));
  }
  std::vector<unsigned char> buf(static_cast<std::size_t>(size));
  in.read(reinterpret_cast<char*>(buf.data()),
          static_cast<std::streamsize>(buf.size()));
  if (!in) {
    throw std::runtime_error("read failed: " + path.string());
  }
  Vector out(expected);
  for (Index i = 0; i < expected; ++i) {
    std::uint64_t bits = 0;
    for (int byte = 0; byte < 8; ++byte) {
      bits |= static_cast<std::uint64_t>(buf[i * 8 + byte]) << (8 * byte);
    }
    double value;
    std::memcpy(&value, &bits, sizeof value);
    out[i] = value;
  }
  return out;
}

namespace {

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + tmp.string());
    }
    out << text;
    if (!out) {
      throw std::runtime_error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::filesystem::path save_problem(const ProblemBundle& bundle,
                                   const std::filesystem::path& prefix) {
  const ProblemMetadata& meta = bundle.meta;
  const std::filesystem::path dir = prefix.parent_path();
  if (!dir.empty()) std::filesystem::create_directories(dir);
  const std::string stem = prefix.filename().string();

  json manifest;
  manifest["format"] = "bpdn-problem/1";
  manifest["family"] = meta.family;
  manifest["m"] = meta.m;
  manifest["n"] = meta.n;
  manifest["lambda"] = meta.lambda;
  manifest["seed"] = meta.seed;
  json params;
  params["sparsity"] = meta.sparsity;
  params["x_type"] = meta.x_type;
  params["decades"] = meta.decades;
  params["noise_level"] = meta.noise_level;
  params["normalize_columns"] = meta.normalize_columns;
  if (meta.family == "conditioned") params["cond"] = meta.cond;
  if (meta.family == "convolution") params["kernel_width"] = meta.kernel_width;
  manifest["params"] = params;

  json op;
  const LinearOperator& A = *bundle.problem.A;
  if (const auto* dense = dynamic_cast<const DenseOperator*>(&A)) {
    op["type"] = "dense";
    const std::string file = stem + ".A.f64";
    op["payload"] = file;
    // Row-major layout on disk.
    const Matrix& M = dense->matrix();
    std::vector<double> row_major(static_cast<std::size_t>(M.size()));
    for (Index i = 0; i < M.rows(); ++i) {
      for (Index j = 0; j < M.cols(); ++j) {
        row_major[static_cast<std::size_t>(i * M.cols() + j)] = M(i, j);
      }
    }
    write_f64_payload(dir / file, row_major.data(), row_major.size());
  } else if (dynamic_cast<const HeavisideOperator*>(&A) != nullptr) {
    op["type"] = "heaviside";
  } else if (const auto* conv = dynamic_cast<const ConvolutionOperator*>(&A)) {
    op["type"] = "convolution";
    const std::string file = stem + ".kernel.f64";
    op["payload"] = file;
    write_f64_payload(dir / file, conv->kernel().data(),
                      static_cast<std::size_t>(conv->kernel().size()));
  } else {
    throw std::runtime_error("save_problem: unsupported operator type");
  }
  manifest["operator"] = op;

  json payloads;
  const std::string b_file = stem + ".b.f64";
  write_f64_payload(dir / b_file, bundle.problem.b.data(),
                    static_cast<std::size_t>(bundle.problem.b.size()));
  payloads["b"] = b_file;
  const std::string xhat_file = stem + ".xhat.f64";
  write_f64_payload(dir / xhat_file, bundle.xhat.data(),
                    static_cast<std::size_t>(bundle.xhat.size()));
  payloads["xhat"] = xhat_file;
  if (bundle.problem.x_star) {
    const std::string xstar_file = stem + ".xstar.f64";
    write_f64_payload(dir / xstar_file, bundle.problem.x_star->data(),
                      static_cast<std::size_t>(bundle.problem.x_star->size()));
    payloads["xstar"] = xstar_file;
  }
  manifest["payloads"] = payloads;

  const std::filesystem::path manifest_path =
      dir / (stem + ".json");
  write_text_atomic(manifest_path, manifest.dump(2) + "\n");
  return manifest_path;
}

ProblemBundle load_problem(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) {
    throw std::runtime_error("cannot open manifest: " + manifest_path.string());
  }
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw std::runtime_error("bad manifest " + manifest_path.string() + ": " +
                             e.what());
  }
  if (manifest.value("format", "") != "bpdn-problem/1") {
    throw std::runtime_error("unsupported manifest format in " +
                             manifest_path.string());
  }
  const std::filesystem::path dir = manifest_path.parent_path();

  ProblemMetadata meta;
  meta.family = manifest.at("family").get<std::string>();
  meta.m = manifest.at("m").get<Index>();
  meta.n = manifest.at("n").get<Index>();
  meta.lambda = manifest.at("lambda").get<double>();
  meta.seed = manifest.at("seed").get<std::uint64_t>();
  const json& params = manifest.at("params");
  meta.sparsity = params.value("sparsity", std::int64_t{0});
  meta.x_type = params.value("x_type", "gaussian");
  meta.decades = params.value("decades", 0.0);
  meta.noise_level = params.value("noise_level", 0.0);
  meta.normalize_columns = params.value("normalize_columns", false);
  meta.cond = params.value("cond", 0.0);
  meta.kernel_width = params.value("kernel_width", 0.0);

  const json& op = manifest.at("operator");
  const std::string type = op.at("type").get<std::string>();
  std::shared_ptr<const LinearOperator> A;
  if (type == "dense") {
    const Vector flat = read_f64_payload(
        dir / op.at("payload").get<std::string>(), meta.m * meta.n);
    Matrix M(meta.m, meta.n);
    for (Index i = 0; i < meta.m; ++i) {
      for (Index j = 0; j < meta.n; ++j) {
        M(i, j) = flat[i * meta.n + j];
      }
    }
    A = std::make_shared<DenseOperator>(std::move(M));
  } else if (type == "heaviside") {
    A = std::make_shared<HeavisideOperator>(meta.n);
  } else if (type == "convolution") {
    const Vector kernel =
        read_f64_payload(dir / op.at("payload").get<std::string>(), meta.n);
    A = std::make_shared<ConvolutionOperator>(kernel);
  } else {
    throw std::runtime_error("unknown operator type: " + type);
  }

  const json& payloads = manifest.at("payloads");
  const Vector b =
      read_f64_payload(dir / payloads.at("b").get<std::string>(), meta.m);
  Vector xhat =
      read_f64_payload(dir / payloads.at("xhat").get<std::string>(), meta.n);
  std::optional<Vector> x_star;
  if (payloads.contains("xstar")) {
    x_star = read_f64_payload(dir / payloads.at("xstar").get<std::string>(),
                              meta.n);
  }

  return ProblemBundle{BpdnProblem(std::move(A), b, meta.lambda, x_star),
                       std::move(xhat), std::move(meta)};
}

}  // namespace imro
