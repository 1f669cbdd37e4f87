#include "rev/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rev {

static double cross(const RevenueCurve::Pt& o, const RevenueCurve::Pt& a,
                    const RevenueCurve::Pt& b) {
  return (a.q - o.q) * (b.r - o.r) - (a.r - o.r) * (b.q - o.q);
}

RevenueCurve revenue_curve(const Marginal& d) {
  require(d.is_scalar(), "revenue_curve: scalar marginal required");
  require(d.bounded(), "revenue_curve: requires-truncation (unbounded marginal)");
  Marginal dd = d.kind == Marginal::Kind::Parametric ? d.discretized(256) : d;

  std::vector<RevenueCurve::Pt> raw;
  raw.push_back({0.0, 0.0, dd.sentinel_price()});
  for (size_t k = 0; k < dd.support.size(); ++k) {
    if (dd.probs[k] <= 0.0) continue;
    double q = dd.tail(dd.support[k]);
    raw.push_back({q, q * dd.support[k], dd.support[k]});
  }
  std::sort(raw.begin(), raw.end(),
            [](const auto& a, const auto& b) { return a.q < b.q; });

  // upper concave envelope (monotone chain)
  std::vector<RevenueCurve::Pt> hull;
  for (const auto& p : raw) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0.0)
      hull.pop_back();
    hull.push_back(p);
  }
  RevenueCurve c;
  c.pts = std::move(hull);
  return c;
}

double RevenueCurve::eval(double q) const {
  require(q >= -kProbTolAssert && q <= 1.0 + kProbTolAssert, "RevenueCurve: q in [0,1]");
  q = std::clamp(q, 0.0, pts.back().q);
  size_t hi = 1;
  while (hi < pts.size() && pts[hi].q < q) ++hi;
  if (hi == pts.size()) return pts.back().r;
  const Pt &a = pts[hi - 1], &b = pts[hi];
  if (b.q == a.q) return std::max(a.r, b.r);
  double w = (q - a.q) / (b.q - a.q);
  return a.r + w * (b.r - a.r);
}

Lottery RevenueCurve::lottery_at(double q) const {
  require(q >= -kProbTolAssert && q <= 1.0 + kProbTolAssert, "lottery_at: q in [0,1]");
  q = std::clamp(q, 0.0, pts.back().q);
  size_t hi = 1;
  while (hi < pts.size() && pts[hi].q < q) ++hi;
  if (hi == pts.size()) hi = pts.size() - 1;
  const Pt &a = pts[hi - 1], &b = pts[hi];
  Lottery l;
  l.qlo = a.q;
  l.qhi = b.q;
  l.price_lo_q = a.price;
  l.price_hi_q = b.price;
  l.x = (b.q == a.q) ? 1.0 : (b.q - q) / (b.q - a.q);
  return l;
}

double RevenueCurve::peak_q() const {
  double best_r = -1.0, best_q = 0.0;
  for (const auto& p : pts)
    if (p.r > best_r + kProbTolAssert) {
      best_r = p.r;
      best_q = p.q;
    }
  return best_q;
}

double RevenueCurve::peak_r() const {
  double best = 0.0;
  for (const auto& p : pts) best = std::max(best, p.r);
  return best;
}

std::string RevenueCurve::to_csv() const {
  std::ostringstream os;
  os << "q,R,price_lo,price_hi\n";
  for (size_t k = 0; k < pts.size(); ++k) {
    double plo = pts[k].price;
    double phi = (k + 1 < pts.size()) ? pts[k + 1].price : pts[k].price;
    os << pts[k].q << "," << pts[k].r << "," << plo << "," << phi << "\n";
  }
  return os.str();
}

double IronedVirtuals::at(double value) const {
  for (size_t k = 0; k < values.size(); ++k)
    if (std::fabs(values[k] - value) <= 1e-9 * std::max(1.0, std::fabs(value)))
      return phi[k];
  throw std::runtime_error("IronedVirtuals: value not in support");
}

IronedVirtuals ironed_virtuals(const Marginal& d) {
  require(d.kind == Marginal::Kind::Discrete, "ironed_virtuals: discrete marginal required");
  RevenueCurve c = revenue_curve(d);
  IronedVirtuals iv;
  for (size_t k = 0; k < d.support.size(); ++k) {
    double q = d.tail(d.support[k]);
    // left derivative of R at quantile q: slope of the segment ending at q
    double slope = 0.0;
    for (size_t s = 1; s < c.pts.size(); ++s) {
      if (c.pts[s].q >= q - kProbTolAssert) {
        slope = (c.pts[s].r - c.pts[s - 1].r) / (c.pts[s].q - c.pts[s - 1].q);
        break;
      }
    }
    iv.values.push_back(d.support[k]);
    iv.phi.push_back(slope);
  }
  return iv;
}

RegularityReport check_regular_curve(const Marginal& d, int grid) {
  require(grid >= 2, "check_regular_curve: grid >= 2");
  // The inequality is about the raw curve q * F^{-1}(1-q); the concave
  // envelope would mask non-regularity.
  auto raw = [&d](double q) { return q * quantile(d, q); };
  RegularityReport rep;
  for (int a = 1; a < grid; ++a) {
    double qp = (double)a / grid;  // q'
    double rqp = raw(qp);
    for (int b = a; b < grid; ++b) {
      double q = (double)b / grid;
      double rq = raw(q);
      for (int e = b; e < grid; ++e) {
        double p = (double)e / grid;
        double viol = (1.0 - p) * rqp - rq;
        if (viol > rep.worst_violation) {
          rep.worst_violation = viol;
          rep.at_qprime = qp;
          rep.at_q = q;
          rep.at_p = p;
        }
      }
    }
  }
  rep.regular = rep.worst_violation <= 1e-9;
  return rep;
}

}  // namespace rev
