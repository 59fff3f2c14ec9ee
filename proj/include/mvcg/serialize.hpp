#pragma once

#include <string>
#include <utility>

#include "mvcg/dataset.hpp"
#include "mvcg/env.hpp"
#include "mvcg/harness.hpp"
#include "mvcg/mechanism.hpp"
#include "mvcg/oracle.hpp"

namespace mvcg {

/// JSON dump of an instance with tables flattened row-major.
std::string instance_json(const LinearMdpInstance& inst);

/// Benchmark values rounded to 12 decimal digits at serialization.
std::string benchmark_json(const VcgBenchmark& bench);

/// One episode per line.
std::string dataset_jsonl(const Dataset& data);
Dataset dataset_from_jsonl(const std::string& text);

/// Line 1 is a meta object (config, dims, instance spec echo, policy tables);
/// each following line is one round.
std::string runlog_jsonl(const RunLog& log, const InstanceSpec& spec);
std::pair<RunLog, InstanceSpec> runlog_from_jsonl(const std::string& text);

/// Compact per-round projection of a run log: the charged prices and the
/// realized (sampled) utilities of every participant.
std::string runlog_csv(const RunLog& log);

std::string summary_json(const ExperimentSummary& summary);

std::string instance_spec_json(const InstanceSpec& spec);

} // namespace mvcg
