#include "srcf/integrator.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "srcf/error.hpp"
#include "srcf/linalg.hpp"
#include "srcf/log.hpp"

namespace srcf {
namespace {

std::string describe_point(const VectorXd& x) {
  std::ostringstream os;
  os.precision(10);
  os << '[';
  for (Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << ']';
  return os.str();
}

void require_finite(const MatrixXd& values, const MatrixXd& points, Index first_column, int repetition) {
  if (values.allFinite()) return;
  for (Index j = 0; j < values.cols(); ++j) {
    if (!values.col(j).allFinite()) {
      std::ostringstream os;
      os << "integrand is not finite at point " << first_column + j << " of repetition " << repetition
         << ", x = " << describe_point(points.col(j));
      throw NonFiniteIntegrand(os.str());
    }
  }
}

VectorXd pairwise_range(std::span<const VectorXd> terms) {
  if (terms.size() == 1) return terms.front();
  const std::size_t half = terms.size() / 2;
  return pairwise_range(terms.first(half)) + pairwise_range(terms.subspan(half));
}

}  // namespace

void GaussianBelief::validate() const {
  const Index n = mean.size();
  if (n == 0) throw std::invalid_argument("GaussianBelief: empty mean");
  if (cov.rows() != n || cov.cols() != n) {
    throw std::invalid_argument("GaussianBelief: covariance is " + std::to_string(cov.rows()) + "x" +
                                std::to_string(cov.cols()) + ", mean has " + std::to_string(n) + " entries");
  }
  if (!mean.allFinite() || !cov.allFinite()) {
    throw std::invalid_argument("GaussianBelief: non-finite mean or covariance");
  }
  const double scale = cov.cwiseAbs().maxCoeff();
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::invalid_argument("GaussianBelief: covariance is not symmetric");
  }
}

Integrand::Integrand(BatchFn fn, Index rows, Index cols) : fn_(std::move(fn)), rows_(rows), cols_(cols) {
  if (!fn_) throw std::invalid_argument("Integrand: empty function");
  if (rows < 1 || cols < 1) throw std::invalid_argument("Integrand: output shape must be positive");
}

Integrand Integrand::pointwise(VectorFn fn, Index rows) {
  return Integrand(
      [fn = std::move(fn), rows](const MatrixXd& points) {
        MatrixXd out(rows, points.cols());
        for (Index j = 0; j < points.cols(); ++j) {
          const VectorXd v = fn(points.col(j));
          if (v.size() != rows) {
            throw std::invalid_argument("Integrand: function returned " + std::to_string(v.size()) +
                                        " values, declared " + std::to_string(rows));
          }
          out.col(j) = v;
        }
        return out;
      },
      rows);
}

Integrand Integrand::matrix(MatrixFn fn, Index rows, Index cols) {
  return Integrand(
      [fn = std::move(fn), rows, cols](const MatrixXd& points) {
        MatrixXd out(rows * cols, points.cols());
        for (Index j = 0; j < points.cols(); ++j) {
          const MatrixXd m = fn(points.col(j));
          if (m.rows() != rows || m.cols() != cols) {
            throw std::invalid_argument("Integrand: matrix function returned the wrong shape");
          }
          for (Index r = 0; r < rows; ++r) {
            for (Index c = 0; c < cols; ++c) out(r * cols + c, j) = m(r, c);
          }
        }
        return out;
      },
      rows, cols);
}

Integrand Integrand::scalar(ScalarFn fn) {
  return Integrand(
      [fn = std::move(fn)](const MatrixXd& points) {
        MatrixXd out(1, points.cols());
        for (Index j = 0; j < points.cols(); ++j) out(0, j) = fn(points.col(j));
        return out;
      },
      1);
}

MatrixXd Integrand::operator()(const MatrixXd& points) const {
  MatrixXd out = fn_(points);
  if (out.rows() != output_size() || out.cols() != points.cols()) {
    throw std::invalid_argument("Integrand: batch output has shape " + std::to_string(out.rows()) + "x" +
                                std::to_string(out.cols()) + ", expected " +
                                std::to_string(output_size()) + "x" + std::to_string(points.cols()));
  }
  return out;
}

MatrixXd unflatten(const VectorXd& flat, Index rows, Index cols) {
  if (flat.size() != rows * cols) throw std::invalid_argument("unflatten: size mismatch");
  MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = flat(r * cols + c);
  }
  return m;
}

VectorXd pairwise_sum(std::span<const VectorXd> terms) {
  if (terms.empty()) throw std::invalid_argument("pairwise_sum: no terms");
  return pairwise_range(terms);
}

std::vector<VectorXd> expect_batch(std::span<const Integrand> fns, const GaussianBelief& belief,
                                   const IntegrationScheme& scheme, RngStream& rng) {
  belief.validate();
  const Index n = belief.dimension();
  scheme.validate(n);
  if (fns.empty()) return {};
  if (scheme.deterministic() && scheme.repetitions > 1) {
    warn(std::string(to_string(scheme.kind)) + " is deterministic; ignoring " +
         std::to_string(scheme.repetitions) + " repetitions");
  }

  const MatrixXd root = spd_sqrt(belief.cov);
  const int reps = scheme.effective_repetitions();
  const RngStream call = rng.substream(rng.next_u64());

  // partials[f][l]: weighted sum of function f over repetition l.
  std::vector<std::vector<VectorXd>> partials(fns.size());
  std::vector<VectorXd> at_center;

  for (int l = 0; l < reps; ++l) {
    RngStream stream = call.substream(static_cast<std::uint64_t>(l));
    const SigmaPointSet rule = build_rule(scheme, n, stream);
    const Index first = rule.has_center ? 1 : 0;
    const Index count = rule.size() - first;

    MatrixXd points = root * rule.points.rightCols(count);
    points.colwise() += belief.mean;
    const VectorXd weights = rule.weights.tail(count);

    if (rule.has_center && at_center.empty()) {
      const MatrixXd center = belief.mean;
      for (const Integrand& fn : fns) {
        MatrixXd value = fn(center);
        require_finite(value, center, 0, l);
        at_center.emplace_back(value.col(0));
      }
    }

    for (std::size_t f = 0; f < fns.size(); ++f) {
      const MatrixXd values = fns[f](points);
      require_finite(values, points, first, l);
      VectorXd sum = values * weights;
      if (rule.has_center) sum += rule.weights(0) * at_center[f];
      partials[f].push_back(std::move(sum));
    }
  }

  std::vector<VectorXd> out;
  out.reserve(fns.size());
  for (const auto& terms : partials) out.push_back(pairwise_sum(terms) / static_cast<double>(reps));
  return out;
}

VectorXd expect(const Integrand& s, const GaussianBelief& belief, const IntegrationScheme& scheme,
                RngStream& rng) {
  return expect_batch(std::span<const Integrand>(&s, 1), belief, scheme, rng).front();
}

}  // namespace srcf
