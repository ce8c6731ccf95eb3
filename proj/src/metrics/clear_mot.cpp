#include "pap/metrics/clear_mot.hpp"

#include "pap/kernels/distance.hpp"
#include "pap/perception/assignment.hpp"

namespace pap::metrics {

FrameEvents match_frame(std::span<const GtBox> gt, std::span<const Hypothesis> hyps, double match_distance,
                        MatchMemory& memory, std::int64_t frame) {
  using perception::CostMatrix;
  using perception::kForbidden;

  FrameEvents ev;
  ev.frame = frame;

  std::vector<double> hx(hyps.size()), hy(hyps.size());
  for (std::size_t j = 0; j < hyps.size(); ++j) {
    hx[j] = hyps[j].center.x;
    hy[j] = hyps[j].center.y;
  }
  CostMatrix distances(gt.size(), hyps.size());
  CostMatrix costs(gt.size(), hyps.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    kernels::gated_distance_row(gt[i].center, hx, hy, match_distance, std::span<double>(distances.row(i), hyps.size()));
    const auto remembered = memory.find(gt[i].id);
    for (std::size_t j = 0; j < hyps.size(); ++j) {
      const double d = distances.at(i, j);
      if (d == kForbidden) continue;
      const bool continues = remembered != memory.end() && remembered->second == hyps[j].track_id;
      costs.at(i, j) = continues ? d : d + kContinuityBias;
    }
  }

  const perception::Assignment a = perception::associate(costs);
  for (const perception::Match& m : a.matches) {
    ++ev.tp;
    ev.tp_distances.push_back(distances.at(m.row, m.col));
    const std::uint64_t gt_id = gt[m.row].id;
    const std::uint64_t track = hyps[m.col].track_id;
    auto [it, inserted] = memory.try_emplace(gt_id, track);
    if (!inserted && it->second != track) {
      ++ev.ids;
      it->second = track;
    }
  }
  ev.fn = static_cast<std::int64_t>(a.unmatched_rows.size());
  ev.fp = static_cast<std::int64_t>(a.unmatched_cols.size());
  return ev;
}

}  // namespace pap::metrics
