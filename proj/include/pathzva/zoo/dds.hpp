#pragma once

#include <memory>
#include <string>

#include "pathzva/errors.hpp"
#include "pathzva/zoo/multicomponent.hpp"

namespace pathzva::zoo {

enum class DdsStrategy { Dedicated, DiskPriority, ProcPriority, Fcfs };

inline DdsStrategy parse_dds_strategy(const std::string& s) {
  if (s == "dedicated") return DdsStrategy::Dedicated;
  if (s == "disk-priority") return DdsStrategy::DiskPriority;
  if (s == "proc-priority") return DdsStrategy::ProcPriority;
  if (s == "fcfs") return DdsStrategy::Fcfs;
  throw ConfigError("dds: unknown strategy '" + s + "' (dedicated|disk-priority|proc-priority|fcfs)");
}

inline std::string to_string(DdsStrategy s) {
  switch (s) {
    case DdsStrategy::Dedicated: return "dedicated";
    case DdsStrategy::DiskPriority: return "disk-priority";
    case DdsStrategy::ProcPriority: return "proc-priority";
    case DdsStrategy::Fcfs: return "fcfs";
  }
  return "?";
}

struct DdsSpec {
  double epsilon = 0.01;
  DdsStrategy strategy = DdsStrategy::Dedicated;
  bool emit_orders = true;
};

/// Distributed database system with slow disk repairs: 2 processors, two sets
/// of 2 controllers and 6 clusters of 6 disks. Type indices: 0 processors,
/// 1-2 controller sets, 3-8 disk clusters.
inline MulticomponentSpec dds_spec(const DdsSpec& d) {
  MulticomponentSpec spec;
  spec.name = "dds";
  spec.epsilon = d.epsilon;
  spec.emit_orders = d.emit_orders;
  spec.types.push_back({"processors", 2, {0.5, 2}, std::nullopt, FailureMode::Linear, {1.0, 0}, 1, false, 2});
  for (int i = 1; i <= 2; ++i)
    spec.types.push_back(
        {"controllers" + std::to_string(i), 2, {0.5, 2}, std::nullopt, FailureMode::Linear, {1.0, 0}, 1, false, 2});
  for (int i = 1; i <= 6; ++i)
    spec.types.push_back(
        {"disks" + std::to_string(i), 6, {1.0 / 6.0, 2}, std::nullopt, FailureMode::Linear, {1.0, 1}, 1, false, 4});
  switch (d.strategy) {
    case DdsStrategy::Dedicated:
      spec.strategy = RepairStrategy::Dedicated;
      break;
    case DdsStrategy::DiskPriority:
      spec.strategy = RepairStrategy::SinglePriority;
      spec.priority = {8, 7, 6, 5, 4, 3, 2, 1, 0};
      break;
    case DdsStrategy::ProcPriority:
      spec.strategy = RepairStrategy::SinglePriority;
      spec.priority = {0, 1, 2, 3, 4, 5, 6, 7, 8};
      break;
    case DdsStrategy::Fcfs:
      spec.strategy = RepairStrategy::Fcfs;
      break;
  }
  return spec;
}

inline std::unique_ptr<MulticomponentModel> make_dds(const DdsSpec& d) {
  return std::make_unique<MulticomponentModel>(dds_spec(d));
}

}  // namespace pathzva::zoo
