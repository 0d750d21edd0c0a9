#include "twinrank/checkpoint/system_level.hpp"

#include "twinrank/core/encoding.hpp"

namespace twinrank::checkpoint {

CheckpointImage capture_system_image(const runtime::Run& run, std::uint32_t seq) {
  CheckpointImage img;
  img.kind = ImageKind::kSystem;
  img.seq = seq;
  const bool drop_dirty = run.options().mutations.drop_dirty_state;
  for (const auto& pair : run.pairs()) {
    RankImage r;
    r.stage_ordinal = run.cursor();
    for (const auto& strand : pair.strands) {
      r.payloads.push_back(canonical_encode(drop_dirty ? pair.strands.front() : strand));
    }
    img.ranks.push_back(std::move(r));
  }
  return img;
}

CheckpointImage take_system_checkpoint(runtime::Run& run, RunDirectory& dir, std::uint32_t seq) {
  CheckpointImage img = capture_system_image(run, seq);
  dir.write_system_image(img);
  return img;
}

runtime::Run restore_system_image(std::shared_ptr<const runtime::App> app,
                                  const runtime::RunOptions& options,
                                  const CheckpointImage& image) {
  if (image.kind != ImageKind::kSystem) throw FormatError("not a system image");
  if (image.ranks.size() != app->rank_count()) throw FormatError("image rank count mismatch");
  runtime::Run run(app, options);
  const std::uint32_t ordinal = image.ranks.front().stage_ordinal;
  for (std::uint32_t r = 0; r < image.ranks.size(); ++r) {
    const RankImage& ri = image.ranks[r];
    auto& pair = run.pair(Rank{r});
    if (ri.stage_ordinal != ordinal) throw FormatError("image is not a consistent cut");
    if (ri.payloads.size() != pair.strands.size()) throw FormatError("image strand count mismatch");
    const State schema = app->initial_state(Rank{r});
    for (std::size_t s = 0; s < pair.strands.size(); ++s) {
      pair.strands[s] = canonical_decode(ri.payloads[s], schema);
    }
  }
  run.seek(ordinal + 1);
  return run;
}

runtime::Run restore_system_checkpoint(std::shared_ptr<const runtime::App> app,
                                       const runtime::RunOptions& options,
                                       const RunDirectory& dir, std::uint32_t seq) {
  return restore_system_image(std::move(app), options, dir.read_system_image(seq));
}

std::optional<runtime::DetectionEvent> SystemCheckpointPolicy::on_checkpoint(
    runtime::Run& run, const runtime::Stage& stage) {
  auto seq = run.app().checkpoint_index(stage.id.ordinal);
  take_system_checkpoint(run, dir_, seq.value());
  return std::nullopt;
}

}  // namespace twinrank::checkpoint
