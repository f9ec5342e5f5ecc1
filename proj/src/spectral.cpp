#include "revspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

namespace revspec {

bool SpectrumEntry::has_invariant_channel() const {
  return std::any_of(channels.begin(), channels.end(), [](const Attribution& a) { return a.k == 0; });
}

int multiplicity_of(const std::vector<Attribution>& channels) {
  int m = 0;
  for (const auto& a : channels) m += a.k == 0 ? 1 : 2;
  return m;
}

SpectrumTable merge_channels(std::vector<ChannelSpectrum> channels, double upto, double cluster_tol) {
  SpectrumTable table;
  table.cluster_tol = cluster_tol;
  table.cutoff = upto;

  struct Item {
    double lambda;
    int k, j;
  };
  std::vector<Item> items;
  for (const auto& cs : channels)
    for (std::size_t j = 0; j < cs.eigenvalues.size(); ++j)
      if (cs.eigenvalues[j] <= upto) items.push_back({cs.eigenvalues[j], cs.k, static_cast<int>(j) + 1});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return std::tie(a.lambda, a.k, a.j) < std::tie(b.lambda, b.k, b.j);
  });

  for (std::size_t i = 0; i < items.size();) {
    const double anchor = items[i].lambda;
    SpectrumEntry e;
    double sum = 0.0;
    std::size_t end = i;
    while (end < items.size() && items[end].lambda - anchor <= cluster_tol * std::abs(anchor)) {
      e.channels.push_back({items[end].k, items[end].j});
      sum += items[end].lambda;
      ++end;
    }
    e.lambda = sum / static_cast<double>(end - i);
    std::sort(e.channels.begin(), e.channels.end(),
              [](const Attribution& a, const Attribution& b) { return std::tie(a.k, a.j) < std::tie(b.k, b.j); });
    for (std::size_t c = 1; c < e.channels.size(); ++c) {
      if (e.channels[c].k == e.channels[c - 1].k) {
        std::ostringstream msg;
        msg << "channel " << e.channels[c].k << " contributes twice to the cluster at " << e.lambda
            << "; multiplicity is unreliable";
        table.diagnostics.push_back(msg.str());
      }
    }
    e.multiplicity = multiplicity_of(e.channels);
    table.entries.push_back(std::move(e));
    i = end;
  }

  for (std::size_t m = 0; m < table.entries.size(); ++m) {
    const int index = static_cast<int>(m) + 1;
    if (table.entries[m].multiplicity > 2 * index + 1) {
      std::ostringstream msg;
      msg << "multiplicity " << table.entries[m].multiplicity << " of lambda_" << index
          << " exceeds 2m+1; the table is incomplete or over-merged";
      table.diagnostics.push_back(msg.str());
    }
  }
  table.channels = std::move(channels);
  return table;
}

SpectrumTable enumerate_below(const Profile& p, double cutoff, const SpectralOptions& opts) {
  if (!(cutoff > 0.0) || !std::isfinite(cutoff)) throw std::invalid_argument("cutoff must be positive");
  // Channel k >= 1 starts above |k|, so only |k| < cutoff can contribute.
  const int channel_count = static_cast<int>(std::ceil(cutoff));
  if (channel_count > opts.max_channels)
    throw ResourceError("cutoff " + std::to_string(cutoff) + " needs " + std::to_string(channel_count) +
                        " channels, above the cap of " + std::to_string(opts.max_channels));
  const double trace0 = trace0_integral(p);
  const int max_depth = opts.solver.basis_cap / 2 - 1;

  std::vector<ChannelSpectrum> channels;
  double worst = 0.0;
  for (int k = 0; k < channel_count; ++k) {
    // lambda_k^m > m|k| (resp. m / trace0) bounds how deep a channel can reach.
    const double depth_real = k == 0 ? std::ceil(cutoff * trace0) : std::ceil(cutoff / k);
    const int depth = std::max(1, static_cast<int>(depth_real));
    if (depth > max_depth)
      throw ResourceError("channel " + std::to_string(k) + " needs " + std::to_string(depth) +
                          " eigenvalues, above the basis cap");
    ChannelSpectrum cs = refine(p, k, depth, opts.target_rel_err, opts.solver);
    worst = std::max(worst, cs.worst_estimate());
    channels.push_back(std::move(cs));
  }

  const double certified = cutoff * (1.0 - worst);
  SpectrumTable table = merge_channels(std::move(channels), certified, opts.cluster_tol);
  table.requested_cutoff = cutoff;
  for (const auto& cs : table.channels)
    for (const auto& d : cs.diagnostics) table.diagnostics.push_back("channel " + std::to_string(cs.k) + ": " + d);
  return table;
}

double trace0_integral(const Profile& p) {
  return 0.5 * integrate_over_profile(p, [&p](double x) { return 1.0 / p.h(x); });
}

double trace_partial_sum(const ChannelSpectrum& cs, int J) {
  if (J < 0 || J > static_cast<int>(cs.eigenvalues.size()))
    throw std::invalid_argument("partial sum length exceeds the available eigenvalues");
  double sum = 0.0;
  for (int j = 0; j < J; ++j) sum += 1.0 / cs.eigenvalues[j];
  return sum;
}

double trace_target(const Profile& p, int k) {
  return k == 0 ? trace0_integral(p) : 1.0 / std::abs(k);
}

double lambda01_upper_bound(const Profile& p) {
  return 1.5 * integrate_over_profile(p, [&p](double x) { return p.f(x); });
}

double channel_lower_bound(const Profile& p, int k, int m) {
  if (m < 1) throw std::invalid_argument("eigenvalue index must be at least 1");
  if (k == 0) return m / trace0_integral(p);
  return static_cast<double>(m) * std::abs(k);
}

BoundsReport bounds_report(const Profile& p, int k_max, int m_max) {
  BoundsReport r;
  r.lambda01_upper = lambda01_upper_bound(p);
  r.trace0_integral = trace0_integral(p);
  for (int k = 0; k <= k_max; ++k)
    for (int m = 1; m <= m_max; ++m)
      r.channel_lower_bounds[{k, m}] = k == 0 ? m / r.trace0_integral : static_cast<double>(m) * k;
  return r;
}

}  // namespace revspec
