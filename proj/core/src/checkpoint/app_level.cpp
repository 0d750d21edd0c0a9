#include "twinrank/checkpoint/app_level.hpp"

#include "twinrank/core/digest.hpp"
#include "twinrank/core/encoding.hpp"

namespace twinrank::checkpoint {

AppCheckpointOutcome take_app_checkpoint(const runtime::Run& run, const runtime::Stage& stage,
                                         RunDirectory& dir) {
  CheckpointImage img;
  img.kind = ImageKind::kApplication;
  img.seq = run.app().checkpoint_index(stage.id.ordinal).value();
  for (const auto& pair : run.pairs()) {
    const auto names = run.app().significant_fields(pair.rank, stage.id);
    std::vector<Bytes> snaps;
    std::vector<Digest64> digests;
    for (const auto& strand : pair.strands) {
      snaps.push_back(canonical_encode(strand.select(names)));
      digests.push_back(hash64(snaps.back()));
    }
    for (std::size_t s = 1; s < snaps.size(); ++s) {
      if (digests[s] != digests.front()) {
        auto off = first_difference(snaps.front(), snaps[s]);
        return AppCheckpointOutcome{AppCheckpointResult::kCorruptedDiscarded, pair.rank,
                                    off.value_or(0)};
      }
    }
    img.ranks.push_back(RankImage{stage.id.ordinal, {std::move(snaps.front())}, digests.front()});
  }
  dir.replace_app_image(img);
  return AppCheckpointOutcome{};
}

runtime::Run restore_app_image(std::shared_ptr<const runtime::App> app,
                               const runtime::RunOptions& options, const CheckpointImage& image) {
  if (image.kind != ImageKind::kApplication) throw FormatError("not an application image");
  if (image.ranks.size() != app->rank_count()) throw FormatError("image rank count mismatch");
  runtime::Run run(app, options);
  const std::uint32_t ordinal = image.ranks.front().stage_ordinal;
  const StageId& ckpt = app->stage(ordinal).id;
  for (std::uint32_t r = 0; r < image.ranks.size(); ++r) {
    const RankImage& ri = image.ranks[r];
    if (ri.stage_ordinal != ordinal) throw FormatError("image is not a consistent cut");
    if (hash64(ri.payloads.front()) != ri.digest) throw FormatError("application image digest mismatch");
    const auto names = app->significant_fields(Rank{r}, ckpt);
    auto& pair = run.pair(Rank{r});
    const State saved = canonical_decode(ri.payloads.front(), pair.strands.front().select(names));
    for (auto& strand : pair.strands) strand.assign_from(saved);
  }
  run.seek(ordinal + 1);
  return run;
}

std::optional<runtime::DetectionEvent> AppCheckpointPolicy::on_checkpoint(
    runtime::Run& run, const runtime::Stage& stage) {
  AppCheckpointOutcome out = take_app_checkpoint(run, stage, dir_);
  if (out.result == AppCheckpointResult::kValidStored) return std::nullopt;
  return runtime::DetectionEvent{runtime::DetectionKind::kSdcMismatch, out.rank, stage.id,
                                 out.offset, run.steps_executed()};
}

}  // namespace twinrank::checkpoint
