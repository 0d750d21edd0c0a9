#include "twinrank/checkpoint/run_directory.hpp"

#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>
#include <string>

#include <json.hpp>

namespace twinrank::checkpoint {

namespace fs = std::filesystem;

namespace {

constexpr const char* kLedgerFile = "ledger.json";
constexpr const char* kEventsFile = "events.jsonl";
constexpr const char* kAppImageFile = "ckpt_app_current.bin";
const std::regex kSystemImageName(R"(ckpt_sys_(\d+)\.bin)");
const std::regex kAppImageName(R"(ckpt_app_.*\.bin(\.tmp)?)");

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

RunLedger MemoryLedgerStore::load_ledger() {
  std::lock_guard lock(mu_);
  return ledger_;
}

void MemoryLedgerStore::store_ledger(const RunLedger& ledger) {
  std::lock_guard lock(mu_);
  ledger_ = ledger;
}

RunDirectory::RunDirectory(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw StorageError("cannot create run directory " + root_.string() + ": " + ec.message());
}

void RunDirectory::reset() {
  std::lock_guard lock(mu_);
  static const std::regex kOwned(
      R"((ckpt_sys_\d+\.bin|ckpt_app_.*\.bin(\.tmp)?|ledger\.json|events\.jsonl|result\.json|timing\.json))");
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (entry.is_regular_file() && std::regex_match(entry.path().filename().string(), kOwned)) {
      fs::remove(entry.path());
    }
  }
}

void RunDirectory::write_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw StorageError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw StorageError("cannot replace " + path.string() + ": " + ec.message());
}

RunLedger RunDirectory::load_ledger() {
  std::lock_guard lock(mu_);
  fs::path p = root_ / kLedgerFile;
  if (!fs::exists(p)) return {};
  try {
    auto j = nlohmann::json::parse(std::ifstream(p));
    return RunLedger{j.at("injected").get<bool>(), j.at("failures").get<std::uint64_t>(),
                     j.at("extern_counter").get<std::uint64_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw StorageError("corrupt ledger " + p.string() + ": " + e.what());
  }
}

void RunDirectory::store_ledger(const RunLedger& ledger) {
  std::lock_guard lock(mu_);
  nlohmann::ordered_json j;
  j["injected"] = ledger.injected;
  j["failures"] = ledger.failures;
  j["extern_counter"] = ledger.extern_counter;
  std::string text = j.dump(2) + "\n";
  write_atomic(root_ / kLedgerFile,
               std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

fs::path RunDirectory::system_image_path(std::uint32_t seq) const {
  return root_ / ("ckpt_sys_" + std::to_string(seq) + ".bin");
}

void RunDirectory::write_system_image(const CheckpointImage& image) {
  if (image.kind != ImageKind::kSystem) throw std::invalid_argument("not a system image");
  Bytes bytes = serialize(image);
  std::lock_guard lock(mu_);
  write_atomic(system_image_path(image.seq), bytes);
}

CheckpointImage RunDirectory::read_system_image(std::uint32_t seq) const {
  fs::path p = system_image_path(seq);
  if (!fs::exists(p)) throw MissingCheckpoint("no system checkpoint " + std::to_string(seq));
  return deserialize(read_file(p));
}

std::vector<std::uint32_t> RunDirectory::system_seqs() const {
  std::vector<std::uint32_t> out;
  std::smatch m;
  for (const auto& entry : fs::directory_iterator(root_)) {
    std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, kSystemImageName)) {
      out.push_back(static_cast<std::uint32_t>(std::stoul(m[1].str())));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

fs::path RunDirectory::app_image_path() const { return root_ / kAppImageFile; }

void RunDirectory::replace_app_image(const CheckpointImage& image) {
  if (image.kind != ImageKind::kApplication) throw std::invalid_argument("not an application image");
  Bytes bytes = serialize(image);
  std::lock_guard lock(mu_);
  write_atomic(app_image_path(), bytes);
}

std::optional<CheckpointImage> RunDirectory::read_app_image() const {
  fs::path p = app_image_path();
  if (!fs::exists(p)) return std::nullopt;
  return deserialize(read_file(p));
}

std::size_t RunDirectory::app_image_count() const {
  std::size_t n = 0;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (std::regex_match(entry.path().filename().string(), kAppImageName)) ++n;
  }
  return n;
}

void RunDirectory::append_event(const runtime::DetectionEvent& event) {
  std::lock_guard lock(mu_);
  std::ofstream out(root_ / kEventsFile, std::ios::app);
  if (!out) throw StorageError("cannot append to event log");
  out << runtime::to_json_line(event) << '\n';
}

std::vector<runtime::DetectionEvent> RunDirectory::read_events() const {
  std::vector<runtime::DetectionEvent> out;
  std::ifstream in(root_ / kEventsFile);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(runtime::parse_json_line(line));
  }
  return out;
}

}  // namespace twinrank::checkpoint
