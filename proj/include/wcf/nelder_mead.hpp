#ifndef WCF_NELDER_MEAD_HPP
#define WCF_NELDER_MEAD_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace wcf {

struct NelderMeadOptions {
  long max_evals = 20000;
  double x_tol = 1e-12;
  double f_tol = 1e-14;
  double initial_step = 0.25;
};

template <typename Scalar>
struct NelderMeadResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  Scalar f;
  long evals = 0;
};

/// Nelder-Mead simplex minimization with dimension-adaptive coefficients.
/// Stops when both the simplex diameter and the spread of function values
/// fall below the tolerances, or the evaluation budget runs out.
template <typename Scalar, typename F>
NelderMeadResult<Scalar> nelder_mead(F&& f, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& x0,
                                     const NelderMeadOptions& opt = {}) {
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index d = x0.size();
  const Scalar dd = static_cast<Scalar>(std::max<Eigen::Index>(d, 1));
  const Scalar reflect = 1, expand = 1 + 2 / dd, contract = Scalar(0.75) - 1 / (2 * dd),
               shrink = 1 - 1 / dd;

  NelderMeadResult<Scalar> res;
  auto eval = [&](const Vec& x) {
    ++res.evals;
    return static_cast<Scalar>(f(x));
  };

  std::vector<Vec> pts(static_cast<std::size_t>(d + 1), x0);
  std::vector<Scalar> vals(static_cast<std::size_t>(d + 1));
  for (Eigen::Index i = 0; i < d; ++i) {
    Scalar& xi = pts[static_cast<std::size_t>(i + 1)][i];
    xi += xi != Scalar(0) ? Scalar(opt.initial_step) * xi : Scalar(opt.initial_step);
  }
  for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> idx(pts.size());
  auto sort_simplex = [&] {
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    std::vector<Vec> p2;
    std::vector<Scalar> v2;
    for (std::size_t i : idx) {
      p2.push_back(pts[i]);
      v2.push_back(vals[i]);
    }
    pts = std::move(p2);
    vals = std::move(v2);
  };

  while (res.evals < opt.max_evals && d > 0) {
    sort_simplex();
    Scalar diam = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      diam = std::max(diam, (pts[i] - pts[0]).cwiseAbs().maxCoeff());
    if (diam <= opt.x_tol && vals.back() - vals.front() <= opt.f_tol) break;

    Vec centroid = Vec::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) centroid += pts[static_cast<std::size_t>(i)];
    centroid /= dd;
    const Vec& worst = pts.back();

    const Vec xr = centroid + reflect * (centroid - worst);
    const Scalar fr = eval(xr);
    if (fr < vals.front()) {
      const Vec xe = centroid + expand * (xr - centroid);
      const Scalar fe = eval(xe);
      if (fe < fr) {
        pts.back() = xe;
        vals.back() = fe;
      } else {
        pts.back() = xr;
        vals.back() = fr;
      }
      continue;
    }
    if (fr < vals[static_cast<std::size_t>(d - 1)]) {
      pts.back() = xr;
      vals.back() = fr;
      continue;
    }
    const bool outside = fr < vals.back();
    const Vec xc = outside ? Vec(centroid + contract * (xr - centroid))
                           : Vec(centroid - contract * (centroid - worst));
    const Scalar fc = eval(xc);
    if (fc < (outside ? fr : vals.back())) {
      pts.back() = xc;
      vals.back() = fc;
      continue;
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      pts[i] = pts[0] + shrink * (pts[i] - pts[0]);
      vals[i] = eval(pts[i]);
    }
  }
  sort_simplex();
  res.x = pts.front();
  res.f = vals.front();
  return res;
}

}  // namespace wcf

#endif  // WCF_NELDER_MEAD_HPP
