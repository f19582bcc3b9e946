// Copyright 2026 The ilgqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <vector>

#include "ilgqa/corpus.hpp"
#include "ilgqa/curriculum.hpp"
#include "ilgqa/errors.hpp"
#include "ilgqa/extraction.hpp"
#include "ilgqa/layout_graph.hpp"
#include "ilgqa/lexicon.hpp"
#include "ilgqa/pipeline.hpp"
#include "ilgqa/qa.hpp"
#include "ilgqa/text.hpp"

namespace py = pybind11;

namespace {

ilgqa::Matchers matchers_for(const std::string& domain) {
  return ilgqa::Matchers::compile(
      ilgqa::default_lexicon(ilgqa::parse_domain(domain)));
}

py::dict extract_py(const std::string& utterance, const std::string& domain) {
  const ilgqa::Matchers matchers = matchers_for(domain);
  const ilgqa::MentionSource source{"py", 1, ilgqa::UtteranceField::kUser};
  const ilgqa::UtteranceExtraction ex =
      ilgqa::extract_utterance(utterance, source, matchers);

  py::list mentions;
  for (const auto& m : ex.mentions) {
    mentions.append(py::make_tuple(m.article, m.color, m.asset_type));
  }
  py::list chains;
  for (const auto& located : ex.chains) {
    py::list steps;
    for (const auto& [relation, item] : located.chain.steps) {
      steps.append(py::make_tuple(relation, item));
    }
    py::dict chain;
    chain["steps"] = steps;
    chain["surface"] = located.chain.surface_text;
    chains.append(chain);
  }
  py::dict out;
  out["mentions"] = mentions;
  out["chains"] = chains;
  return out;
}

std::vector<std::string> tag_subset_py(const std::string& response,
                                       const std::string& domain) {
  const auto flags = ilgqa::tag_subset(response, matchers_for(domain));
  std::vector<std::string> out;
  if (flags.count(ilgqa::SubsetFlag::kVisual)) out.push_back("visual");
  if (flags.count(ilgqa::SubsetFlag::kSpatial)) out.push_back("spatial");
  return out;
}

double competence_py(long t, long total_steps, double alpha, double beta,
                     double min_difficulty) {
  ilgqa::CurriculumConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.total_steps = total_steps;
  cfg.min_difficulty = min_difficulty;
  cfg.windows = 1;
  return ilgqa::competence(t, cfg);
}

// Graphs as {scene_id: canonical JSON string}; Python callers can parse
// or persist them without a dedicated graph class.
std::map<std::string, std::string> build_graphs_py(
    const std::string& corpus_dir, const std::string& domain,
    int adjacency_window) {
  const ilgqa::Domain dom = ilgqa::parse_domain(domain);
  const ilgqa::Lexicon lexicon = ilgqa::default_lexicon(dom);
  const ilgqa::Corpus corpus =
      ilgqa::ingest_canonical(corpus_dir, dom, lexicon);
  ilgqa::AlignOptions options;
  options.adjacency_window = adjacency_window;
  const ilgqa::GraphBuildResult built =
      ilgqa::build_graphs(corpus, ilgqa::Matchers::compile(lexicon), options);
  std::map<std::string, std::string> out;
  for (const auto& [scene_id, graph] : built.graphs) {
    out[scene_id] = ilgqa::serialize(graph);
  }
  return out;
}

py::dict pair_to_dict(const ilgqa::QAPair& p) {
  py::dict d;
  d["task_type"] = ilgqa::to_string(p.task_type);
  d["question"] = p.question;
  d["answer"] = p.answer;
  d["scene_id"] = p.scene_id;
  d["image_path"] = p.image_path;
  d["asset_id"] = p.asset_id;
  d["raw_span_count"] = p.raw_span_count;
  d["difficulty"] = p.difficulty;
  return d;
}

py::list read_qa_pairs_py(const std::string& path) {
  py::list out;
  for (const auto& p : ilgqa::read_qa_pairs(path)) {
    out.append(pair_to_dict(p));
  }
  return out;
}

py::dict stats_to_dict(const ilgqa::RunStats& s) {
  py::dict d;
  d["dialogues"] = s.dialogues;
  d["turns"] = s.turns;
  d["scenes"] = s.scenes;
  d["assets"] = s.assets;
  d["aligned"] = s.extraction.aligned;
  d["graphs"] = s.graphs;
  d["nodes"] = s.nodes;
  d["edges"] = s.edges;
  d["qa_pairs"] = s.qa_pairs;
  d["per_task"] = s.per_task;
  d["skipped_no_bbox"] = s.skipped_no_bbox;
  d["deduplicated"] = s.deduplicated;
  d["max_spanned"] = s.max_spanned;
  d["difficulty_histogram"] =
      std::vector<long>(s.difficulty_histogram.begin(),
                        s.difficulty_histogram.end());
  d["per_window_eligible"] = s.per_window_eligible;
  return d;
}

py::dict run_py(const std::string& input, const std::string& output_dir,
                long total_steps, const std::string& domain,
                const std::string& input_format, int adjacency_window,
                bool longest_path_only, double alpha, double beta,
                int windows, std::uint64_t seed, long shard_size) {
  ilgqa::PipelineConfig cfg;
  cfg.input = input;
  cfg.input_format = input_format;
  cfg.domain = ilgqa::parse_domain(domain);
  cfg.adjacency_window = adjacency_window;
  cfg.longest_path_only = longest_path_only;
  cfg.curriculum.alpha = alpha;
  cfg.curriculum.beta = beta;
  cfg.curriculum.total_steps = total_steps;
  cfg.curriculum.windows = windows;
  cfg.curriculum.seed = seed;
  cfg.curriculum.shard_size = shard_size;
  cfg.output_dir = output_dir;
  return stats_to_dict(ilgqa::run(cfg));
}

}  // namespace

PYBIND11_MODULE(_ilgqa, m) {
  m.doc() =
      "Layout-graph and QA dataset toolchain for situated multimodal "
      "dialogue corpora";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ilgqa::InternalError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    } catch (const ilgqa::Error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("normalize_text",
        [](const std::string& raw) { return ilgqa::normalize(raw).text; },
        py::arg("text"),
        "Lowercase, isolate punctuation and collapse whitespace");

  m.def("extract", &extract_py, py::arg("utterance"),
        py::arg("domain") = "fashion",
        "Extract visual-attribute mentions and spatial chains from one "
        "utterance");

  m.def("tag_subset", &tag_subset_py, py::arg("response"),
        py::arg("domain") = "fashion",
        "Flags ('visual', 'spatial') describing a system response");

  m.def("competence", &competence_py, py::arg("t"), py::arg("total_steps"),
        py::arg("alpha") = 1.2, py::arg("beta") = 0.8,
        py::arg("min_difficulty") = 0.0,
        "Curriculum competence at step t, clamped to [min_difficulty, 1]");

  m.def("build_graphs", &build_graphs_py, py::arg("corpus_dir"),
        py::arg("domain") = "fashion", py::arg("adjacency_window") = 2,
        "Build per-scene layout graphs; returns {scene_id: graph JSON}");

  m.def("read_qa_pairs", &read_qa_pairs_py, py::arg("path"),
        "Load a qa_pairs.jsonl file as a list of dicts");

  m.def("run", &run_py, py::arg("input"), py::arg("output_dir"),
        py::arg("total_steps"), py::arg("domain") = "fashion",
        py::arg("input_format") = "canonical",
        py::arg("adjacency_window") = 2,
        py::arg("longest_path_only") = false, py::arg("alpha") = 1.2,
        py::arg("beta") = 0.8, py::arg("windows") = 100,
        py::arg("seed") = 0, py::arg("shard_size") = 0,
        "Full pipeline: ingest, graphs, QA generation, curriculum shards; "
        "returns the run statistics");
}
