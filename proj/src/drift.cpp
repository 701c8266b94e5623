#include "kh/drift.hpp"

#include "kh/error.hpp"

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace kh {

namespace {

// Pade coefficients and 1-norm thresholds for degrees 3..13 (double precision).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                          25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9 = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                           30270240.0,    2162160.0,    110880.0,     3960.0,
                                           90.0,          1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const Eigen::MatrixXd& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

template <std::size_t N>
Eigen::MatrixXd pade_low(const Eigen::MatrixXd& a, const std::array<double, N>& b) {
  const auto n = a.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  Eigen::MatrixXd even = b[0] * ident;
  Eigen::MatrixXd odd = b[1] * ident;
  Eigen::MatrixXd power = ident;
  for (std::size_t i = 2; i + 1 < N + 1; i += 2) {
    power = power * a2;
    even += b[i] * power;
    if (i + 1 < N) odd += b[i + 1] * power;
  }
  const Eigen::MatrixXd u = a * odd;
  return (even - u).partialPivLu().solve(even + u);
}

Eigen::MatrixXd pade13(const Eigen::MatrixXd& a) {
  const auto& b = kPade13;
  const auto n = a.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
           b[1] * ident);
  const Eigen::MatrixXd v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "expm needs a square matrix");
  }
  if (!a.allFinite()) throw Error(ErrorCode::NonFinite, "expm input has non-finite entries");
  const double nrm = one_norm(a);
  if (nrm <= kTheta3) return pade_low(a, kPade3);
  if (nrm <= kTheta5) return pade_low(a, kPade5);
  if (nrm <= kTheta7) return pade_low(a, kPade7);
  if (nrm <= kTheta9) return pade_low(a, kPade9);
  int squarings = 0;
  if (nrm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
  Eigen::MatrixXd r = pade13(a / std::ldexp(1.0, squarings));
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

DriftMatrix::DriftMatrix(Eigen::MatrixXd b) : DriftMatrix(std::move(b), true) {}

DriftMatrix::DriftMatrix(Eigen::MatrixXd b, bool check) : b_(std::move(b)), d_(0) {
  if (b_.rows() != b_.cols() || b_.rows() % 2 != 0 || b_.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "drift matrix must be 2d x 2d",
                std::to_string(b_.rows()) + "x" + std::to_string(b_.cols()));
  }
  d_ = static_cast<int>(b_.rows() / 2);
  if (d_ > kMaxDim) throw Error(ErrorCode::InvalidArgument, "drift dimension exceeds kMaxDim");
  if (!b_.allFinite()) throw Error(ErrorCode::NonFinite, "drift matrix has non-finite entries");
  if (check && !b12_full_rank()) {
    throw Error(ErrorCode::InvalidArgument, "block B12 must have rank d");
  }
}

DriftMatrix DriftMatrix::unchecked(Eigen::MatrixXd b) { return DriftMatrix(std::move(b), false); }

DriftMatrix DriftMatrix::kinetic(int d) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  b.block(0, d, d, d).setIdentity();
  return DriftMatrix(std::move(b));
}

DriftMatrix DriftMatrix::parse(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::string normalized = text;
  for (char& c : normalized)
    if (c == ';') c = '\n';
  std::istringstream lines(normalized);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "matrix entry is not a number", tok);
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::InvalidArgument, "empty drift matrix");
  Eigen::MatrixXd b(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw Error(ErrorCode::DimensionMismatch, "ragged drift matrix rows");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) b(i, j) = rows[i][j];
  }
  return DriftMatrix(std::move(b));
}

DriftMatrix DriftMatrix::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open matrix file", path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Eigen::MatrixXd DriftMatrix::block(int row, int col) const {
  return b_.block((row - 1) * d_, (col - 1) * d_, d_, d_);
}

double DriftMatrix::norm() const { return spectral_norm(b_); }

double DriftMatrix::block_norm(int row, int col) const { return spectral_norm(block(row, col)); }

bool DriftMatrix::b12_full_rank() const {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block(1, 2));
  const auto& sv = svd.singularValues();
  return sv(0) > 0.0 && sv(d_ - 1) > 1e-10 * sv(0);
}

void DriftMatrix::apply_flow(double tau, Vec& x, Vec& v) const {
  Eigen::VectorXd xv(2 * d_);
  xv << x, v;
  const Eigen::VectorXd out = flow(tau) * xv;
  x = out.head(d_);
  v = out.tail(d_);
}

}  // namespace kh
