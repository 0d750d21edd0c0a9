#include "twinrank/checkpoint/image.hpp"

#include <algorithm>
#include <string>

#include "twinrank/core/digest.hpp"
#include "twinrank/core/encoding.hpp"
#include "twinrank/core/errors.hpp"

namespace twinrank::checkpoint {

Bytes serialize(const CheckpointImage& image) {
  if (image.ranks.size() > 0xFFFF) throw FormatError("too many ranks for image header");
  Bytes out(kImageMagic.begin(), kImageMagic.end());
  put_u16(out, kImageVersion);
  out.push_back(static_cast<std::uint8_t>(image.kind));
  put_u32(out, image.seq);
  put_u16(out, static_cast<std::uint16_t>(image.ranks.size()));
  for (const auto& r : image.ranks) {
    put_u32(out, r.stage_ordinal);
    if (image.kind == ImageKind::kSystem) {
      if (r.payloads.empty() || r.payloads.size() > 0xFF) throw FormatError("bad strand count");
      out.push_back(static_cast<std::uint8_t>(r.payloads.size()));
      for (const auto& p : r.payloads) put_u64(out, p.size());
    } else {
      if (r.payloads.size() != 1) throw FormatError("application image needs one payload per rank");
      put_u64(out, r.payloads.front().size());
      put_u64(out, r.digest.value);
    }
  }
  for (const auto& r : image.ranks) {
    for (const auto& p : r.payloads) out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

CheckpointImage deserialize(std::span<const std::uint8_t> in) {
  try {
    if (in.size() < 4 || !std::equal(kImageMagic.begin(), kImageMagic.end(), in.begin())) {
      throw FormatError("bad image magic");
    }
    std::size_t pos = 4;
    if (get_u16(in, pos) != kImageVersion) throw FormatError("unsupported image version");
    pos += 2;
    if (pos >= in.size()) throw FormatError("truncated image header");
    const std::uint8_t kind = in[pos++];
    if (kind != 1 && kind != 2) throw FormatError("bad image kind " + std::to_string(kind));
    CheckpointImage img;
    img.kind = static_cast<ImageKind>(kind);
    img.seq = get_u32(in, pos);
    pos += 4;
    const std::uint16_t nranks = get_u16(in, pos);
    pos += 2;

    std::vector<std::vector<std::uint64_t>> lengths(nranks);
    img.ranks.resize(nranks);
    for (std::uint16_t r = 0; r < nranks; ++r) {
      img.ranks[r].stage_ordinal = get_u32(in, pos);
      pos += 4;
      if (img.kind == ImageKind::kSystem) {
        if (pos >= in.size()) throw FormatError("truncated image header");
        const std::uint8_t strands = in[pos++];
        if (strands == 0) throw FormatError("zero strands in system image");
        for (std::uint8_t s = 0; s < strands; ++s, pos += 8) lengths[r].push_back(get_u64(in, pos));
      } else {
        lengths[r].push_back(get_u64(in, pos));
        img.ranks[r].digest = Digest64{get_u64(in, pos + 8)};
        pos += 16;
      }
    }
    for (std::uint16_t r = 0; r < nranks; ++r) {
      for (std::uint64_t len : lengths[r]) {
        if (len > in.size() - pos) throw FormatError("image payload truncated");
        img.ranks[r].payloads.emplace_back(in.begin() + pos, in.begin() + pos + len);
        pos += len;
      }
    }
    if (pos != in.size()) throw FormatError("trailing bytes in image");
    if (img.kind == ImageKind::kApplication) {
      for (const auto& r : img.ranks) {
        if (hash64(r.payloads.front()) != r.digest) throw FormatError("application image digest mismatch");
      }
    }
    return img;
  } catch (const EncodingError& e) {
    throw FormatError(std::string("image header: ") + e.what());
  }
}

}  // namespace twinrank::checkpoint
