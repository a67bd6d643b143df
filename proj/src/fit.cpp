#include "nambu/fit.hpp"

#include <cmath>

#include "nambu/symbol.hpp"

namespace nambu {

FitResult fit_rate(std::span<const int> ks, std::span<const double> residuals, bool drop_smallest) {
  if (ks.size() != residuals.size()) throw Error("k list and residual list differ in length");
  for (std::size_t i = 1; i < ks.size(); ++i)
    if (ks[i] <= ks[i - 1]) throw Error("k list must be strictly increasing");

  FitResult fit;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if ((drop_smallest && i == 0) || !(residuals[i] >= kZeroResidual)) {
      fit.excluded_ks.push_back(ks[i]);
      continue;
    }
    lx.push_back(std::log(static_cast<double>(ks[i])));
    ly.push_back(std::log(residuals[i]));
  }
  fit.points = static_cast<int>(lx.size());
  if (fit.points < 4) throw Error("rate fit needs at least 4 usable points");

  const double n = fit.points;
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < fit.points; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace nambu
