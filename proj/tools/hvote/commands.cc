/* Copyright 2026 The HoughVote Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "commands.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "houghvote/attribution.h"
#include "houghvote/decoder.h"
#include "houghvote/heatmap.h"
#include "houghvote/parallel.h"
#include "houghvote/tensor_io.h"
#include "json.hpp"

namespace houghvote::cli {
namespace {

using nlohmann::json;

// Output sink that is either the process stdout or a file.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw Error(ErrorCode::kIoError, "cannot open " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }
  void Close() {
    if (file_) {
      file_->close();
      if (!*file_) throw Error(ErrorCode::kIoError, "write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string ReadText(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<int> ParsePermutation(const std::string& path) {
  try {
    return json::parse(ReadText(path)).get<std::vector<int>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec,
                std::string("permutation must be a JSON int array: ") + e.what());
  }
}

VoteField FieldFromOptions(const std::string& spec_path,
                           const std::vector<int>& keep_rings) {
  VoteField field = BuildVoteField(LoadVoteFieldSpec(spec_path));
  if (!keep_rings.empty()) {
    field = MaskRegions(field, std::set<int>(keep_rings.begin(), keep_rings.end()));
  }
  return field;
}

// Evidence for a masked field keeps only the source channels of its regions.
TensorF RestrictToField(const TensorF& evidence, const VoteField& field,
                        int full_regions) {
  if (field.num_regions() == full_regions) return evidence;
  const std::vector<int> channels = SourceChannels(field);
  if (evidence.rank() == 3) return SelectChannels(evidence, channels);
  std::vector<TensorF> parts;
  for (std::size_t c = 0; c < evidence.dim(0); ++c) {
    parts.push_back(SelectChannels(evidence.Slice(c), channels));
  }
  return Stack<float>(parts);
}

// ---------------------------------------------------------------- field

struct FieldArgs {
  std::string spec;
  std::string region_map;
  std::vector<int> keep_rings;
};

int CmdField(const FieldArgs& a, std::ostream& out) {
  const VoteField field = FieldFromOptions(a.spec, a.keep_rings);
  out << "R=" << field.num_regions() << " field=" << field.field_side() << "\n";
  out << "region ring sector K\n";
  for (int r = 0; r < field.num_regions(); ++r) {
    const Region& region = field.region(r);
    out << r << ' ' << region.ring << ' ';
    if (region.sector < 0) {
      out << '-';
    } else {
      out << region.sector;
    }
    out << ' ' << region.count() << "\n";
  }
  if (!a.region_map.empty()) {
    const std::vector<int> grid = field.RegionGrid();
    const auto side = static_cast<std::size_t>(field.field_side());
    TensorF map(Shape{side, side});
    for (std::size_t p = 0; p < grid.size(); ++p) map[p] = static_cast<float>(grid[p]);
    WriteTensor(map, a.region_map);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- vote

struct VoteArgs {
  std::string evidence;
  std::string spec;
  std::string output;
  std::string backend = "gather";
  double sparse_threshold = 0.0;
  int threads = 0;
  std::vector<int> keep_rings;
  std::string temporal_evidence;
  std::string temporal_spec;
};

int CmdVote(const VoteArgs& a) {
  VoteOptions options;
  options.backend = ParseBackend(a.backend);
  options.sparse_threshold = a.sparse_threshold;
  options.threads = a.threads;
  if (a.sparse_threshold < 0.0) {
    throw Error(ErrorCode::kInvalidSpec, "--sparse-threshold must be >= 0");
  }

  const VoteField full = BuildVoteField(LoadVoteFieldSpec(a.spec));
  const VoteField field = FieldFromOptions(a.spec, a.keep_rings);
  std::optional<VoteField> temporal_field;
  if (!a.temporal_evidence.empty()) {
    temporal_field = a.temporal_spec.empty()
                         ? BuildTemporalField()
                         : BuildVoteField(LoadVoteFieldSpec(a.temporal_spec));
  }

  const TensorF raw = ReadTensorF32(a.evidence);
  if (raw.rank() != 3 && raw.rank() != 4) {
    throw Error(ErrorCode::kShapeMismatch,
                "evidence must be H x W x R or C x H x W x R, got " +
                    ShapeString(raw.shape()));
  }
  if (static_cast<int>(raw.shape().back()) != full.num_regions()) {
    throw Error(ErrorCode::kShapeMismatch,
                "evidence has " + std::to_string(raw.shape().back()) +
                    " region channels, field has " +
                    std::to_string(full.num_regions()));
  }
  const TensorF evidence = RestrictToField(raw, field, full.num_regions());

  TensorF presence = evidence.rank() == 3 ? Vote(evidence, field, options)
                                          : VoteAllClasses(evidence, field, options);
  if (temporal_field) {
    const TensorF motion = ReadTensorF32(a.temporal_evidence);
    if (motion.rank() != evidence.rank()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "temporal evidence rank differs from visual evidence");
    }
    const TensorF motion_votes = motion.rank() == 3
                                     ? Vote(motion, *temporal_field, options)
                                     : VoteAllClasses(motion, *temporal_field, options);
    if (motion_votes.shape() != presence.shape()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "temporal evidence does not match visual evidence");
    }
    for (std::size_t i = 0; i < presence.size(); ++i) presence[i] += motion_votes[i];
  }
  WriteTensor(presence, a.output);
  return kExitOk;
}

// ---------------------------------------------------------------- decode

struct DecodeArgs {
  std::string presence;
  std::string wh;
  std::string offset;
  std::string output;
  int top_k = kDefaultTopK;
  int stride = kDefaultStride;
  double score_thresh = kDefaultScoreThreshold;
  bool coco = false;
  long long image_id = 0;
};

int CmdDecode(const DecodeArgs& a, std::ostream& stdout_stream) {
  if (a.top_k < 1) throw Error(ErrorCode::kInvalidSpec, "--top-k must be >= 1");
  TensorF presence = ReadTensorF32(a.presence);
  if (presence.rank() == 2) {
    presence = TensorF(Shape{1, presence.dim(0), presence.dim(1)},
                       std::vector<float>(presence.values().begin(),
                                          presence.values().end()));
  }
  AuxMaps aux;
  aux.wh = ReadTensorF32(a.wh);
  aux.offset = ReadTensorF32(a.offset);
  aux.stride = a.stride;
  const std::vector<Detection> dets = DecodeAll(presence, aux, a.top_k, a.score_thresh);

  Sink sink(a.output, stdout_stream);
  if (a.coco) {
    WriteDetectionsCoco(sink.get(), dets, a.image_id);
  } else {
    WriteDetectionsJsonl(sink.get(), dets);
  }
  sink.Close();
  return kExitOk;
}

// ---------------------------------------------------------------- attribute

struct AttributeArgs {
  std::string evidence;
  std::string spec;
  std::vector<int> center;
  int class_id = 0;
  bool keep_zeros = false;
  bool verify = false;
  std::string output;
  std::string heatmap;
  std::string underlay;
};

int CmdAttribute(const AttributeArgs& a, std::ostream& stdout_stream,
                 std::ostream& err) {
  const VoteField field = BuildVoteField(LoadVoteFieldSpec(a.spec));
  TensorF evidence = ReadTensorF32(a.evidence);
  if (evidence.rank() == 4) {
    if (a.class_id < 0 || static_cast<std::size_t>(a.class_id) >= evidence.dim(0)) {
      throw Error(ErrorCode::kOutOfBounds,
                  "--class " + std::to_string(a.class_id) + " outside stack");
    }
    evidence = evidence.Slice(a.class_id);
  }
  const int cy = a.center.at(0);
  const int cx = a.center.at(1);
  const std::vector<VoteRecord> records =
      Attribute(evidence, field, cy, cx, a.keep_zeros);

  double total = 0.0;
  json votes = json::array();
  for (const VoteRecord& rec : records) {
    total += rec.strength;
    votes.push_back({{"voter", {rec.i, rec.j}},
                     {"region", rec.r},
                     {"strength", rec.strength}});
  }
  json doc = {{"center", {cy, cx}},
              {"class_id", a.class_id},
              {"total_strength", total},
              {"votes", votes}};

  int status = kExitOk;
  if (a.verify) {
    const PresenceMap presence = VoteScatter(evidence, field);
    const double expected =
        presence[static_cast<std::size_t>(cy) * evidence.dim(1) + cx];
    const double tol = kAgreementTolerance * std::max(std::abs(expected), std::abs(total)) + 1e-12;
    const bool ok = std::abs(expected - total) <= tol;
    doc["presence"] = expected;
    doc["verified"] = ok;
    if (!ok) {
      err << "attribute: vote sum " << total << " differs from presence "
          << expected << "\n";
      status = kExitData;
    }
  }

  Sink sink(a.output, stdout_stream);
  sink.get() << doc.dump(1) << "\n";
  sink.Close();

  if (!a.heatmap.empty()) {
    const PresenceMap map = VoteMap(records, static_cast<int>(evidence.dim(0)),
                                    static_cast<int>(evidence.dim(1)));
    const RgbImage image =
        a.underlay.empty()
            ? RenderHeatmap(map)
            : RenderHeatmap(map, ImageFromTensor(ReadTensorF32(a.underlay)));
    WritePng(image, a.heatmap);
  }
  return status;
}

// ---------------------------------------------------------------- interactions

struct InteractionArgs {
  std::string evidence;
  std::string probs;
  std::string detections;
  std::string spec;
  std::string labels;
  std::string output;
  int stride = kDefaultStride;
};

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

int CmdInteractions(const InteractionArgs& a, std::ostream& stdout_stream) {
  const VoteField field = BuildVoteField(LoadVoteFieldSpec(a.spec));
  const TensorF evidence = ReadTensorF32(a.evidence);
  const TensorF probs = ReadTensorF32(a.probs);
  std::ifstream det_in(a.detections);
  if (!det_in) throw Error(ErrorCode::kIoError, "cannot open " + a.detections);
  const std::vector<Detection> dets = ReadDetectionsJsonl(det_in, a.stride);
  const TensorD matrix = ClassInteractions(dets, evidence, probs, field);

  const std::size_t classes = matrix.dim(0);
  std::vector<std::string> names;
  if (a.labels.empty()) {
    for (std::size_t c = 0; c < classes; ++c) names.push_back("class_" + std::to_string(c));
  } else {
    names = LoadLabelMap(a.labels);
    if (names.size() != classes) {
      throw Error(ErrorCode::kShapeMismatch,
                  "label map has " + std::to_string(names.size()) +
                      " names for " + std::to_string(classes) + " classes");
    }
  }

  Sink sink(a.output, stdout_stream);
  std::ostream& os = sink.get();
  os << "getter";
  for (const auto& n : names) os << ',' << CsvField(n);
  os << "\n" << std::setprecision(17);
  for (std::size_t r = 0; r < classes; ++r) {
    os << CsvField(names[r]);
    for (std::size_t c = 0; c < classes; ++c) os << ',' << matrix.at({r, c});
    os << "\n";
  }
  sink.Close();
  return kExitOk;
}

// ---------------------------------------------------------------- convert

struct ConvertArgs {
  std::string input;
  std::string output;
  std::string dtype;
  std::string remap;
};

int CmdConvert(const ConvertArgs& a) {
  AnyTensor tensor = ReadTensor(a.input);
  if (!a.remap.empty()) {
    const std::vector<int> perm = ParsePermutation(a.remap);
    tensor = std::visit([&](const auto& t) -> AnyTensor { return RemapRegions(t, perm); },
                        tensor);
  }
  if (a.dtype == "f32") {
    if (auto* d = std::get_if<TensorD>(&tensor)) {
      tensor = TensorF(d->shape(), std::vector<float>(d->values().begin(), d->values().end()));
    }
  } else if (a.dtype == "f64") {
    if (auto* f = std::get_if<TensorF>(&tensor)) {
      tensor = TensorD(f->shape(), std::vector<double>(f->values().begin(), f->values().end()));
    }
  } else if (!a.dtype.empty()) {
    throw Error(ErrorCode::kUnsupportedDtype, "--dtype must be f32 or f64");
  }
  WriteTensor(tensor, a.output);
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::string> sizes{"128x128"};
  int classes = 80;
  std::string spec;
  std::vector<std::string> backends{"scatter", "gather", "kernel", "sparse"};
  int repeats = 5;
  std::uint64_t seed = 42;
  int threads = 0;
  double sparse_threshold = 0.0;
  double density = 1.0;
  std::string output;
};

std::pair<int, int> ParseSize(const std::string& s) {
  int h = 0;
  int w = 0;
  char x = 0;
  std::istringstream is(s);
  if (!(is >> h >> x >> w) || x != 'x' || h < 1 || w < 1 || !is.eof()) {
    throw Error(ErrorCode::kInvalidSpec, "size must look like 128x128, got " + s);
  }
  return {h, w};
}

int CmdBench(const BenchArgs& a, std::ostream& stdout_stream) {
  BenchConfig config;
  config.classes = a.classes;
  if (!a.spec.empty()) config.field = LoadVoteFieldSpec(a.spec);
  config.backends.clear();
  for (const auto& name : a.backends) config.backends.push_back(ParseBackend(name));
  config.repeats = a.repeats;
  config.seed = a.seed;
  config.threads = a.threads;
  config.sparse_threshold = a.sparse_threshold;
  config.density = a.density;
  if (config.classes < 1 || config.repeats < 1 || config.density < 0.0 ||
      config.density > 1.0) {
    throw Error(ErrorCode::kInvalidSpec,
                "need classes >= 1, repeats >= 1 and density in [0, 1]");
  }

  Sink sink(a.output, stdout_stream);
  bool header = true;
  for (const auto& size : a.sizes) {
    std::tie(config.height, config.width) = ParseSize(size);
    const BenchReport report = RunBench(config);
    std::ostringstream block;
    WriteBenchCsv(block, report);
    std::string text = block.str();
    if (!header) text = text.substr(text.find('\n') + 1);
    header = false;
    sink.get() << text;
  }
  sink.Close();
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kEmptySelection:
    case ErrorCode::kUnknownBackend:
    case ErrorCode::kNotAPermutation:
      return kExitConfig;
    case ErrorCode::kIoError:
      return kExitIo;
    default:
      return kExitData;
  }
}

BenchReport RunBench(const BenchConfig& config) {
  BenchReport report;
  report.config = config;
  report.threads = ResolveThreadCount(config.threads);
  const VoteField field = BuildVoteField(config.field);
  const auto classes = static_cast<std::size_t>(config.classes);
  const auto h = static_cast<std::size_t>(config.height);
  const auto w = static_cast<std::size_t>(config.width);
  const auto regions = static_cast<std::size_t>(field.num_regions());

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<float> value(0.0f, 1.0f);
  std::bernoulli_distribution keep(config.density);
  TensorF evidence(Shape{classes, h, w, regions});
  for (float& v : evidence.values()) {
    const float sample = value(rng);
    v = keep(rng) ? sample : 0.0f;
  }
  for (std::size_t i = 0; i < evidence.size(); ++i) {
    if (evidence[i] != 0.0f && std::abs(evidence[i]) >= config.sparse_threshold) {
      report.votes += field.count(static_cast<int>(i % regions));
    }
  }

  VoteOptions options;
  options.threads = report.threads;
  options.sparse_threshold = config.sparse_threshold;

  options.backend = Backend::kScatter;
  TensorF reference = VoteAllClasses(evidence, field, options);
  if (config.sparse_threshold > 0.0) {
    // Sparse drops small entries; compare everything against scatter on the
    // thresholded tensor.
    TensorF thresholded = evidence;
    for (float& v : thresholded.values()) {
      if (std::abs(v) < config.sparse_threshold) v = 0.0f;
    }
    reference = VoteAllClasses(thresholded, field, options);
    evidence = std::move(thresholded);
  }
  double scale = 0.0;
  for (float v : reference.values()) scale = std::max(scale, std::abs(static_cast<double>(v)));

  for (Backend backend : config.backends) {
    BenchRow row;
    row.backend = backend;
    options.backend = backend;
    const TensorF got = VoteAllClasses(evidence, field, options);
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      worst = std::max(worst, std::abs(static_cast<double>(got[i]) - reference[i]));
    }
    row.max_rel_error = scale > 0.0 ? worst / scale : worst;
    if (row.max_rel_error > kAgreementTolerance) {
      throw Error(ErrorCode::kShapeMismatch,
                  std::string("backend ") + std::string(BackendName(backend)) +
                      " disagrees with scatter: relative error " +
                      std::to_string(row.max_rel_error));
    }
    report.rows.push_back(row);
  }

  for (BenchRow& row : report.rows) {
    options.backend = row.backend;
    std::vector<double> times;
    for (int rep = 0; rep < config.repeats; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      const TensorF out = VoteAllClasses(evidence, field, options);
      const auto stop = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double, std::milli>(stop - start).count());
    }
    std::sort(times.begin(), times.end());
    const std::size_t n = times.size();
    row.median_ms = n % 2 ? times[n / 2] : 0.5 * (times[n / 2 - 1] + times[n / 2]);
    row.votes_per_sec = row.median_ms > 0.0 ? report.votes / (row.median_ms / 1e3) : 0.0;
  }
  const auto scatter = std::find_if(report.rows.begin(), report.rows.end(),
                                    [](const BenchRow& r) { return r.backend == Backend::kScatter; });
  if (scatter != report.rows.end()) {
    for (BenchRow& row : report.rows) {
      row.speedup_vs_scatter = row.median_ms > 0.0 ? scatter->median_ms / row.median_ms : 0.0;
    }
  }
  return report;
}

void WriteBenchCsv(std::ostream& out, const BenchReport& report) {
  out << "backend,height,width,regions,classes,threads,repeats,median_ms,"
         "votes_per_sec,speedup_vs_scatter,max_rel_error\n";
  const VoteField field = BuildVoteField(report.config.field);
  for (const BenchRow& row : report.rows) {
    out << BackendName(row.backend) << ',' << report.config.height << ','
        << report.config.width << ',' << field.num_regions() << ','
        << report.config.classes << ',' << report.threads << ','
        << report.config.repeats << ',' << std::fixed << std::setprecision(3)
        << row.median_ms << ',' << std::setprecision(0) << row.votes_per_sec
        << ',' << std::setprecision(3) << row.speedup_vs_scatter << ','
        << std::scientific << std::setprecision(3) << row.max_rel_error << "\n"
        << std::defaultfloat;
  }
}

int RunHvote(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"Log-polar Hough voting engine", "hvote"};
  app.require_subcommand(1);

  FieldArgs field_args;
  auto* field = app.add_subcommand("field", "Report a vote field's regions");
  field->add_option("spec", field_args.spec, "Field spec JSON")->required();
  field->add_option("--region-map", field_args.region_map,
                    "Write the region-index grid (-1 outside) as a tensor");
  field->add_option("--keep-rings", field_args.keep_rings,
                    "Keep only these 1-based rings")->delimiter(',');

  VoteArgs vote_args;
  auto* vote = app.add_subcommand("vote", "Vote evidence into presence maps");
  vote->add_option("evidence", vote_args.evidence, "H x W x R or C x H x W x R tensor")->required();
  vote->add_option("--field", vote_args.spec, "Field spec JSON")->required();
  vote->add_option("-o,--output", vote_args.output, "Presence tensor")->required();
  vote->add_option("--backend", vote_args.backend, "scatter|gather|kernel|sparse");
  vote->add_option("--sparse-threshold", vote_args.sparse_threshold);
  vote->add_option("--threads", vote_args.threads, "0 = HV_THREADS or all cores");
  vote->add_option("--keep-rings", vote_args.keep_rings,
                   "Vote only through these 1-based rings")->delimiter(',');
  vote->add_option("--temporal-evidence", vote_args.temporal_evidence,
                   "Motion evidence voted through the temporal field");
  vote->add_option("--temporal-field", vote_args.temporal_spec,
                   "Temporal field spec (default: 4 quadrants, diameter 8)");

  DecodeArgs decode_args;
  auto* decode = app.add_subcommand("decode", "Decode presence maps into boxes");
  decode->add_option("presence", decode_args.presence)->required();
  decode->add_option("wh", decode_args.wh)->required();
  decode->add_option("offset", decode_args.offset)->required();
  decode->add_option("-o,--output", decode_args.output, "Default stdout");
  decode->add_option("--top-k", decode_args.top_k);
  decode->add_option("--stride", decode_args.stride);
  decode->add_option("--score-thresh", decode_args.score_thresh);
  decode->add_flag("--coco", decode_args.coco, "COCO results array instead of JSON lines");
  decode->add_option("--image-id", decode_args.image_id);

  AttributeArgs attr_args;
  auto* attribute = app.add_subcommand("attribute", "List the votes behind one pixel");
  attribute->add_option("evidence", attr_args.evidence)->required();
  attribute->add_option("--field", attr_args.spec)->required();
  attribute->add_option("--center", attr_args.center, "cy,cx")
      ->required()->delimiter(',')->expected(2);
  attribute->add_option("--class", attr_args.class_id, "Class slice of a 4-D stack");
  attribute->add_flag("--keep-zeros", attr_args.keep_zeros);
  attribute->add_flag("--verify", attr_args.verify,
                      "Check the vote sum against the presence value");
  attribute->add_option("-o,--output", attr_args.output, "Default stdout");
  attribute->add_option("--heatmap", attr_args.heatmap, "PNG vote map");
  attribute->add_option("--underlay", attr_args.underlay, "H x W x 3 image tensor");

  InteractionArgs inter_args;
  auto* interactions = app.add_subcommand("interactions", "Class vote-giver matrix");
  interactions->add_option("--evidence", inter_args.evidence)->required();
  interactions->add_option("--probs", inter_args.probs)->required();
  interactions->add_option("--detections", inter_args.detections)->required();
  interactions->add_option("--field", inter_args.spec)->required();
  interactions->add_option("--labels", inter_args.labels);
  interactions->add_option("--stride", inter_args.stride);
  interactions->add_option("-o,--output", inter_args.output, "Default stdout");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Time the voting backends");
  bench->add_option("--size", bench_args.sizes, "HxW, repeatable")->delimiter(',');
  bench->add_option("--classes", bench_args.classes);
  bench->add_option("--field", bench_args.spec, "Default 90 degrees, rings 2,8,16");
  bench->add_option("--backend", bench_args.backends)->delimiter(',');
  bench->add_option("--repeats", bench_args.repeats);
  bench->add_option("--seed", bench_args.seed);
  bench->add_option("--threads", bench_args.threads);
  bench->add_option("--sparse-threshold", bench_args.sparse_threshold);
  bench->add_option("--density", bench_args.density);
  bench->add_option("-o,--output", bench_args.output, "Default stdout");

  ConvertArgs convert_args;
  auto* convert = app.add_subcommand("convert", "Change dtype or region order");
  convert->add_option("input", convert_args.input)->required();
  convert->add_option("output", convert_args.output)->required();
  convert->add_option("--dtype", convert_args.dtype, "f32|f64");
  convert->add_option("--remap", convert_args.remap, "JSON permutation of regions");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hvote: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*field) return CmdField(field_args, out);
    if (*vote) return CmdVote(vote_args);
    if (*decode) return CmdDecode(decode_args, out);
    if (*attribute) return CmdAttribute(attr_args, out, err);
    if (*interactions) return CmdInteractions(inter_args, out);
    if (*bench) return CmdBench(bench_args, out);
    if (*convert) return CmdConvert(convert_args);
  } catch (const Error& e) {
    err << "hvote: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  }
  return kExitConfig;
}

}  // namespace houghvote::cli
