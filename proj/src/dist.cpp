#include "rev/dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace rev {

Marginal Marginal::discrete(std::vector<double> support, std::vector<double> probs) {
  require(!support.empty() && support.size() == probs.size(),
          "Marginal: support/probs size mismatch");
  double sum = 0.0;
  for (size_t k = 0; k < support.size(); ++k) {
    require(support[k] >= 0.0, "Marginal: negative support value");
    require(probs[k] >= 0.0, "Marginal: negative probability");
    if (k) require(support[k] > support[k - 1], "Marginal: support not strictly ascending");
    sum += probs[k];
  }
  require(std::fabs(sum - 1.0) <= kProbTolConstruct, "Marginal: probabilities do not sum to 1");
  Marginal d;
  d.kind = Kind::Discrete;
  d.support = std::move(support);
  d.probs = std::move(probs);
  return d;
}

Marginal Marginal::parametric(Family f, std::vector<double> params) {
  Marginal d;
  d.kind = Kind::Parametric;
  d.family = f;
  d.params = std::move(params);
  switch (f) {
    case Family::UniformAB:
      require(d.params.size() == 2 && d.params[0] >= 0 && d.params[1] > d.params[0],
              "uniform[a,b]: need 0 <= a < b");
      break;
    case Family::TruncExp:
      require(d.params.size() == 2 && d.params[0] > 0 && d.params[1] > 0,
              "truncated exponential: need lambda > 0, H > 0");
      break;
    case Family::EqualRevenueTrunc:
      require(d.params.size() == 1 && d.params[0] > 1, "equal-revenue: need H > 1");
      break;
  }
  return d;
}

Marginal Marginal::with_atoms(std::vector<ItemSignal> atoms, std::vector<double> probs) {
  require(!atoms.empty() && atoms.size() == probs.size(), "Marginal: atoms/probs size mismatch");
  double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  require(std::fabs(sum - 1.0) <= kProbTolConstruct, "Marginal: atom probabilities do not sum to 1");
  Marginal d;
  d.kind = Kind::Atoms;
  d.atoms = std::move(atoms);
  d.atom_probs = std::move(probs);
  return d;
}

bool Marginal::bounded() const { return true; }  // every supported family is bounded

double Marginal::upper_bound() const {
  switch (kind) {
    case Kind::Discrete: return support.back();
    case Kind::Parametric:
      switch (family) {
        case Family::UniformAB: return params[1];
        case Family::TruncExp: return params[1];
        case Family::EqualRevenueTrunc: return params[0];
      }
      break;
    case Kind::Atoms: {
      double h = 0.0;
      for (const auto& a : atoms)
        for (double x : a.v) h = std::max(h, x);
      return h;
    }
  }
  return 0.0;
}

double Marginal::lower_bound() const {
  switch (kind) {
    case Kind::Discrete: return support.front();
    case Kind::Parametric:
      switch (family) {
        case Family::UniformAB: return params[0];
        case Family::TruncExp: return 0.0;
        case Family::EqualRevenueTrunc: return 1.0;
      }
      break;
    case Kind::Atoms: break;
  }
  return 0.0;
}

double Marginal::sentinel_price() const {
  require(is_scalar(), "sentinel_price: scalar marginal required");
  return upper_bound() + 1.0;
}

double Marginal::cdf(double x) const {
  switch (kind) {
    case Kind::Discrete: {
      double acc = 0.0;
      for (size_t k = 0; k < support.size() && support[k] <= x; ++k) acc += probs[k];
      return acc;
    }
    case Kind::Parametric:
      switch (family) {
        case Family::UniformAB: {
          double a = params[0], b = params[1];
          if (x < a) return 0.0;
          if (x >= b) return 1.0;
          return (x - a) / (b - a);
        }
        case Family::TruncExp: {
          double lam = params[0], H = params[1];
          if (x < 0) return 0.0;
          if (x >= H) return 1.0;
          return 1.0 - std::exp(-lam * x);
        }
        case Family::EqualRevenueTrunc: {
          double H = params[0];
          if (x < 1.0) return 0.0;
          if (x >= H) return 1.0;
          return 1.0 - 1.0 / x;
        }
      }
      break;
    case Kind::Atoms: break;
  }
  throw std::runtime_error("cdf: scalar marginal required");
}

double Marginal::tail(double x) const {
  switch (kind) {
    case Kind::Discrete: {
      double acc = 0.0;
      for (size_t k = support.size(); k-- > 0 && support[k] >= x;) acc += probs[k];
      return acc;
    }
    case Kind::Parametric:
      switch (family) {
        case Family::UniformAB: {
          double a = params[0], b = params[1];
          if (x <= a) return 1.0;
          if (x > b) return 0.0;
          return (b - x) / (b - a);
        }
        case Family::TruncExp: {
          double lam = params[0], H = params[1];
          if (x <= 0) return 1.0;
          if (x > H) return 0.0;
          return std::exp(-lam * x);  // includes the atom at H
        }
        case Family::EqualRevenueTrunc: {
          double H = params[0];
          if (x <= 1.0) return 1.0;
          if (x > H) return 0.0;
          return 1.0 / x;
        }
      }
      break;
    case Kind::Atoms: break;
  }
  throw std::runtime_error("tail: scalar marginal required");
}

double Marginal::mean() const {
  switch (kind) {
    case Kind::Discrete: {
      double s = 0.0;
      for (size_t k = 0; k < support.size(); ++k) s += support[k] * probs[k];
      return s;
    }
    case Kind::Parametric:
      switch (family) {
        case Family::UniformAB: return 0.5 * (params[0] + params[1]);
        case Family::TruncExp: return (1.0 - std::exp(-params[0] * params[1])) / params[0];
        case Family::EqualRevenueTrunc: return 1.0 + std::log(params[0]);
      }
      break;
    case Kind::Atoms: break;
  }
  throw std::runtime_error("mean: scalar marginal required");
}

double Marginal::sample(Rng& rng) const {
  switch (kind) {
    case Kind::Discrete: return support[rng.pick(probs)];
    case Kind::Parametric: {
      double u = rng.uniform01();
      switch (family) {
        case Family::UniformAB: return params[0] + u * (params[1] - params[0]);
        case Family::TruncExp: return std::min(-std::log1p(-u) / params[0], params[1]);
        case Family::EqualRevenueTrunc: return std::min(1.0 / (1.0 - u), params[0]);
      }
      break;
    }
    case Kind::Atoms: break;
  }
  throw std::runtime_error("sample: unsupported-sampling (non-scalar marginal)");
}

ItemSignal Marginal::sample_signal(Rng& rng) const {
  if (kind == Kind::Atoms) return atoms[rng.pick(atom_probs)];
  return ItemSignal{{sample(rng)}};
}

std::vector<std::pair<ItemSignal, double>> Marginal::enumerate(int grid) const {
  std::vector<std::pair<ItemSignal, double>> out;
  switch (kind) {
    case Kind::Discrete:
      for (size_t k = 0; k < support.size(); ++k)
        out.push_back({ItemSignal{{support[k]}}, probs[k]});
      break;
    case Kind::Parametric: {
      Marginal d = discretized(grid);
      return d.enumerate();
    }
    case Kind::Atoms:
      for (size_t k = 0; k < atoms.size(); ++k) out.push_back({atoms[k], atom_probs[k]});
      break;
  }
  return out;
}

Marginal Marginal::discretized(int grid) const {
  require(kind == Kind::Parametric, "discretized: parametric marginal required");
  require(grid >= 2, "discretized: grid too small");
  std::map<double, double> mass;  // equi-quantile buckets collapsed to their quantile value
  for (int k = 0; k < grid; ++k) {
    double q = (k + 0.5) / grid;      // tail probability
    double x = quantile(*this, q);
    mass[x] += 1.0 / grid;
  }
  std::vector<double> s, p;
  for (auto& [x, w] : mass) { s.push_back(x); p.push_back(w); }
  double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& w : p) w /= sum;
  return Marginal::discrete(s, p);
}

void ProductPrior::validate() const {
  require(n >= 1 && m >= 1, "ProductPrior: n, m >= 1 required");
  require((int)cells.size() == n, "ProductPrior: row count mismatch");
  for (const auto& row : cells) require((int)row.size() == m, "ProductPrior: column count mismatch");
  if (symmetric) {
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        const Marginal &a = cells[0][j], &b = cells[i][j];
        bool eq = a.kind == b.kind && a.support == b.support && a.probs == b.probs &&
                  a.params == b.params && a.atom_probs == b.atom_probs &&
                  a.atoms.size() == b.atoms.size();
        for (size_t k = 0; eq && k < a.atoms.size(); ++k) eq = a.atoms[k] == b.atoms[k];
        require(eq, "ProductPrior: symmetric flag set but rows differ");
      }
  }
}

std::vector<TypeProfile> sample(const ProductPrior& prior, uint64_t seed, int count) {
  require(count >= 1, "sample: count >= 1 required");
  std::vector<TypeProfile> out(count);
  for (int t = 0; t < count; ++t) {
    Rng rng = Rng::split(seed, t);
    TypeProfile p;
    p.signals.resize(prior.n);
    for (int i = 0; i < prior.n; ++i) {
      p.signals[i].reserve(prior.m);
      for (int j = 0; j < prior.m; ++j) p.signals[i].push_back(prior.cell(i, j).sample_signal(rng));
    }
    out[t] = std::move(p);
  }
  return out;
}

double kolmogorov_distance(const Marginal& a, const Marginal& b) {
  require(a.is_scalar() && b.is_scalar(), "kolmogorov_distance: scalar marginals required");
  require(a.bounded() && b.bounded(),
          "kolmogorov_distance: needs-grid (two unbounded marginals)");
  std::vector<double> xs;
  auto add_points = [&xs](const Marginal& d) {
    if (d.kind == Marginal::Kind::Discrete) {
      for (double x : d.support) {
        xs.push_back(x);
        xs.push_back(std::nextafter(x, -1.0));  // left limit matters against continuous parts
      }
    } else {
      double lo = d.lower_bound(), hi = d.upper_bound();
      const int G = 4096;
      for (int k = 0; k <= G; ++k) xs.push_back(lo + (hi - lo) * k / G);
      xs.push_back(std::nextafter(hi, lo));
    }
  };
  add_points(a);
  add_points(b);
  double best = 0.0;
  for (double x : xs) best = std::max(best, std::fabs(a.cdf(x) - b.cdf(x)));
  return best;
}

Marginal empirical(const std::vector<double>& samples) {
  require(!samples.empty(), "empirical: non-empty sample list required");
  std::vector<double> s = samples;
  std::sort(s.begin(), s.end());
  std::vector<double> sup, p;
  for (double x : s) {
    if (!sup.empty() && x == sup.back())
      p.back() += 1.0;
    else {
      sup.push_back(x);
      p.push_back(1.0);
    }
  }
  for (double& w : p) w /= (double)samples.size();
  return Marginal::discrete(sup, p);
}

Marginal truncate(const Marginal& d, double cap) {
  require(cap > 0.0, "truncate: cap > 0 required");
  if (d.kind == Marginal::Kind::Discrete) {
    std::vector<double> s, p;
    for (size_t k = 0; k < d.support.size(); ++k) {
      double x = std::min(d.support[k], cap);
      if (!s.empty() && x == s.back())
        p.back() += d.probs[k];
      else {
        s.push_back(x);
        p.push_back(d.probs[k]);
      }
    }
    return Marginal::discrete(s, p);
  }
  if (d.kind == Marginal::Kind::Parametric) {
    if (cap >= d.upper_bound()) return d;
    switch (d.family) {
      case Marginal::Family::TruncExp:
        return Marginal::parametric(d.family, {d.params[0], cap});
      case Marginal::Family::EqualRevenueTrunc:
        if (cap > 1.0) return Marginal::parametric(d.family, {cap});
        return Marginal::point_mass(cap == 1.0 ? 1.0 : cap);
      case Marginal::Family::UniformAB:
        throw std::runtime_error(
            "truncate: uniform[a,b] truncation leaves the family; discretize first");
    }
  }
  throw std::runtime_error("truncate: scalar marginal required");
}

double quantile(const Marginal& d, double q) {
  require(d.is_scalar(), "quantile: scalar marginal required");
  require(q >= 0.0 && q <= 1.0, "quantile: q in [0,1] required");
  if (q == 0.0) return d.sentinel_price();
  if (d.kind == Marginal::Kind::Discrete) {
    // sup{x : Pr[v >= x] >= q}: scan support from the top
    double acc = 0.0;
    for (size_t k = d.support.size(); k-- > 0;) {
      acc += d.probs[k];
      if (acc >= q - kProbTolAssert) return d.support[k];
    }
    return d.support.front();
  }
  switch (d.family) {
    case Marginal::Family::UniformAB: {
      double a = d.params[0], b = d.params[1];
      return b - q * (b - a);
    }
    case Marginal::Family::TruncExp: {
      double lam = d.params[0], H = d.params[1];
      if (q <= std::exp(-lam * H)) return H;
      return -std::log(q) / lam;
    }
    case Marginal::Family::EqualRevenueTrunc: {
      double H = d.params[0];
      if (q <= 1.0 / H) return H;
      return 1.0 / q;
    }
  }
  throw std::runtime_error("quantile: unreachable");
}

double tail_threshold(const Marginal& d, double lo, double hi) {
  require(d.is_scalar(), "tail_threshold: scalar marginal required");
  require(0.0 < lo && lo < hi && hi <= 1.0, "tail_threshold: need 0 < lo < hi <= 1");
  if (d.kind == Marginal::Kind::Discrete) {
    double best_below = 0.0, best_above = 1.0;
    for (size_t k = d.support.size(); k-- > 0;) {
      double t = d.tail(d.support[k]);
      if (t >= lo - kProbTolAssert && t <= hi + kProbTolAssert) return d.support[k];
      if (t < lo) best_below = std::max(best_below, t);
      if (t > hi) best_above = std::min(best_above, t);
    }
    throw std::runtime_error("tail_threshold: infeasible-band [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "]; nearest achievable tails " +
                             std::to_string(best_below) + " and " + std::to_string(best_above));
  }
  double x = quantile(d, 0.5 * (lo + hi));
  double t = d.tail(x);
  if (t >= lo - kProbTolAssert && t <= hi + kProbTolAssert) return x;
  // atom at the top (truncated families): H itself may carry the band
  double th = d.tail(d.upper_bound());
  if (th >= lo - kProbTolAssert && th <= hi + kProbTolAssert) return d.upper_bound();
  throw std::runtime_error("tail_threshold: infeasible-band; nearest achievable tail " +
                           std::to_string(t));
}

double tail_threshold(const std::vector<double>& samples, double lo, double hi) {
  return tail_threshold(empirical(samples), lo, hi);
}

}  // namespace rev
