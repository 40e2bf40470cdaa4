#pragma once

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <ctime>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qpecert/common.hpp"
#include "qpecert/config.hpp"

namespace qpecert {

struct CheckContext {
  const RunConfig& config;
  std::uint64_t seed;  // per-node seed, derived from (config seed, node name)
};

struct CheckOutcome {
  bool passed = true;
  std::int64_t instances = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string failing_params;
};

// Collects per-instance comparisons into a single outcome. Margin is the
// distance left before the comparison would have failed; the node reports
// the smallest one seen.
class OutcomeAccumulator {
 public:
  // |a - b| <= tol
  void expect_near(double a, double b, double tol, const std::string& params) {
    record(tol - std::abs(a - b), params);
  }
  void expect_near(Complex a, Complex b, double tol, const std::string& params) {
    record(tol - std::abs(a - b), params);
  }
  // observed <= bound + slack
  void expect_le(double observed, double bound, double slack, const std::string& params) {
    record(bound + slack - observed, params);
  }
  // observed > bound with at least required_margin of room
  void expect_gt(double observed, double bound, double required_margin,
                 const std::string& params) {
    record(observed - bound - required_margin, params);
  }
  // exact predicates get one integer unit of margin
  void expect_true(bool ok, const std::string& params) { record(ok ? 1.0 : -1.0, params); }

  CheckOutcome finish() const { return outcome_; }

 private:
  void record(double margin, const std::string& params) {
    ++outcome_.instances;
    if (margin < outcome_.worst_margin) outcome_.worst_margin = margin;
    if (margin < 0.0 && outcome_.passed) {
      outcome_.passed = false;
      outcome_.failing_params = params;
    }
  }

  CheckOutcome outcome_;
};

struct CheckNode {
  std::string name;
  std::vector<std::string> prerequisites;
  std::function<CheckOutcome(const CheckContext&)> runner;
  std::string params;  // human description of the grid the runner sweeps
};

// Directed graph of named checks. Construction validates name uniqueness,
// prerequisite resolution, and acyclicity.
class CheckGraph {
 public:
  static CheckGraph from_nodes(std::vector<CheckNode> nodes) {
    CheckGraph g;
    g.nodes_ = std::move(nodes);
    g.index_by_name_.clear();
    for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
      const auto [it, inserted] = g.index_by_name_.emplace(g.nodes_[i].name, i);
      if (!inserted) throw graph_error("duplicate check name: " + g.nodes_[i].name);
    }
    for (const CheckNode& node : g.nodes_)
      for (const std::string& pre : node.prerequisites)
        if (!g.index_by_name_.count(pre))
          throw graph_error("check " + node.name + " requires unknown node " + pre);
    g.topo_order_ = g.compute_topological_order();  // throws on cycle
    return g;
  }

  const std::vector<CheckNode>& nodes() const { return nodes_; }
  const std::vector<std::size_t>& topological_order() const { return topo_order_; }

  std::size_t index_of(const std::string& name) const {
    const auto it = index_by_name_.find(name);
    if (it == index_by_name_.end()) throw graph_error("unknown check name: " + name);
    return it->second;
  }

  bool contains(const std::string& name) const { return index_by_name_.count(name) > 0; }

  // Indices of the given nodes plus all transitive prerequisites.
  std::set<std::size_t> prerequisite_closure(const std::vector<std::string>& names) const {
    std::set<std::size_t> visited;
    std::vector<std::size_t> stack;
    for (const std::string& name : names) stack.push_back(index_of(name));
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      if (!visited.insert(i).second) continue;
      for (const std::string& pre : nodes_[i].prerequisites) stack.push_back(index_of(pre));
    }
    return visited;
  }

  // Kahn's algorithm; ties broken by registration index so the order is a
  // pure function of the node list.
  std::vector<std::size_t> compute_topological_order() const {
    std::vector<int> pending(nodes_.size(), 0);
    std::vector<std::vector<std::size_t>> dependents(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      pending[i] = static_cast<int>(nodes_[i].prerequisites.size());
      for (const std::string& pre : nodes_[i].prerequisites)
        dependents[index_by_name_.at(pre)].push_back(i);
    }
    std::set<std::size_t> ready;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (pending[i] == 0) ready.insert(i);
    std::vector<std::size_t> order;
    order.reserve(nodes_.size());
    while (!ready.empty()) {
      const std::size_t i = *ready.begin();
      ready.erase(ready.begin());
      order.push_back(i);
      for (std::size_t dep : dependents[i])
        if (--pending[dep] == 0) ready.insert(dep);
    }
    if (order.size() != nodes_.size()) {
      std::string cycle;
      for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (pending[i] > 0) cycle += (cycle.empty() ? "" : ", ") + nodes_[i].name;
      throw graph_error("dependency cycle among: " + cycle);
    }
    return order;
  }

 private:
  std::vector<CheckNode> nodes_;
  std::map<std::string, std::size_t> index_by_name_;
  std::vector<std::size_t> topo_order_;
};

enum class CheckStatus { pass, fail, skipped };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
  }
  return "fail";
}

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::fail;
  std::int64_t instances = 0;
  double worst_margin = 0.0;
  std::optional<std::string> failing_params;
  double elapsed_ms = 0.0;

  bool operator==(const CheckResult&) const = default;
};

struct CheckReport {
  std::string version;
  std::uint64_t seed = 0;
  RunConfig config;
  std::string timestamp;
  std::vector<CheckResult> results;  // in a valid topological order

  bool operator==(const CheckReport&) const = default;

  bool all_passed() const {
    for (const CheckResult& r : results)
      if (r.status == CheckStatus::fail) return false;
    return true;
  }
};

inline constexpr const char* kReportVersion = "1";

struct RunOptions {
  std::set<std::string> fail_inject;  // force these nodes to fail (test hook)
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

// Execute the graph in topological order. Nodes whose prerequisites have all
// completed may run on any worker; results are merged by topological index,
// and every runner derives its randomness from (config seed, node name), so
// the report content is independent of scheduling. A node is skipped when
// any prerequisite failed, was skipped, or was excluded.
inline CheckReport run_suite(const CheckGraph& graph, const RunConfig& config,
                             const RunOptions& options = {}) {
  config.validate();
  graph.compute_topological_order();  // defensive re-check for cycles

  for (const std::string& name : config.include)
    if (!graph.contains(name)) throw config_error("unknown check in include list: " + name);
  for (const std::string& name : config.exclude)
    if (!graph.contains(name)) throw config_error("unknown check in exclude list: " + name);

  // Active set: include-closure (or everything), minus excludes.
  std::set<std::size_t> active;
  if (config.include.empty()) {
    for (std::size_t i = 0; i < graph.nodes().size(); ++i) active.insert(i);
  } else {
    active = graph.prerequisite_closure(config.include);
  }
  std::set<std::size_t> excluded;
  for (const std::string& name : config.exclude) {
    const std::size_t i = graph.index_of(name);
    active.erase(i);
    excluded.insert(i);
  }

  const std::vector<std::size_t>& topo = graph.topological_order();
  std::vector<std::size_t> schedule;  // active nodes in topological order
  for (std::size_t i : topo)
    if (active.count(i)) schedule.push_back(i);

  enum class NodeState { pending, running, done };
  std::vector<NodeState> state(graph.nodes().size(), NodeState::pending);
  std::vector<CheckResult> results_by_index(graph.nodes().size());
  std::mutex mutex;
  std::condition_variable cv;

  auto prerequisites_settled = [&](std::size_t i) {
    for (const std::string& pre : graph.nodes()[i].prerequisites) {
      const std::size_t p = graph.index_of(pre);
      if (excluded.count(p)) continue;  // settled by exclusion
      if (state[p] != NodeState::done) return false;
    }
    return true;
  };

  auto blocked_reason = [&](std::size_t i) -> std::optional<std::string> {
    for (const std::string& pre : graph.nodes()[i].prerequisites) {
      const std::size_t p = graph.index_of(pre);
      if (excluded.count(p)) return "prerequisite excluded: " + pre;
      if (results_by_index[p].status != CheckStatus::pass) {
        const char* what =
            results_by_index[p].status == CheckStatus::fail ? "failed" : "skipped";
        return std::string("prerequisite ") + what + ": " + pre;
      }
    }
    return std::nullopt;
  };

  int worker_count = config.workers > 0
                         ? config.workers
                         : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  worker_count = std::min<int>(worker_count, static_cast<int>(schedule.size()));
  worker_count = std::max(worker_count, 1);

  std::size_t remaining = schedule.size();
  auto worker = [&] {
    std::unique_lock<std::mutex> lock(mutex);
    for (;;) {
      if (remaining == 0) {
        cv.notify_all();
        return;
      }
      // lowest topological index that is pending and unblocked
      std::size_t pick = graph.nodes().size();
      for (std::size_t i : schedule) {
        if (state[i] != NodeState::pending) continue;
        if (!prerequisites_settled(i)) continue;
        pick = i;
        break;
      }
      if (pick == graph.nodes().size()) {
        cv.wait(lock);
        continue;
      }

      const CheckNode& node = graph.nodes()[pick];
      CheckResult result;
      result.name = node.name;

      if (const auto reason = blocked_reason(pick)) {
        result.status = CheckStatus::skipped;
        result.failing_params = *reason;
        state[pick] = NodeState::done;
        results_by_index[pick] = std::move(result);
        --remaining;
        cv.notify_all();
        continue;
      }

      state[pick] = NodeState::running;
      lock.unlock();

      const auto start = std::chrono::steady_clock::now();
      CheckOutcome outcome;
      if (options.fail_inject.count(node.name)) {
        outcome.passed = false;
        outcome.failing_params = "injected failure";
        outcome.worst_margin = -1.0;
      } else {
        const CheckContext ctx{config, mix_seed(config.seed, detail::fnv1a(node.name))};
        try {
          outcome = node.runner(ctx);
        } catch (const std::exception& err) {
          outcome.passed = false;
          outcome.failing_params = std::string("exception: ") + err.what();
          outcome.worst_margin = -1.0;
        }
      }
      const auto stop = std::chrono::steady_clock::now();

      result.status = outcome.passed ? CheckStatus::pass : CheckStatus::fail;
      result.instances = outcome.instances;
      result.worst_margin =
          outcome.worst_margin == std::numeric_limits<double>::infinity() ? 0.0
                                                                          : outcome.worst_margin;
      if (!outcome.failing_params.empty()) result.failing_params = outcome.failing_params;
      result.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();

      lock.lock();
      state[pick] = NodeState::done;
      results_by_index[pick] = std::move(result);
      --remaining;
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(worker_count);
  for (int w = 0; w < worker_count; ++w) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();

  CheckReport report;
  report.version = kReportVersion;
  report.seed = config.seed;
  report.config = config;
  report.timestamp = detail::utc_timestamp();
  for (std::size_t i : schedule) report.results.push_back(std::move(results_by_index[i]));
  return report;
}

// Convenience for ad-hoc node lists; graph validation (including cycle
// rejection) happens on the way in.
inline CheckReport run_suite(std::vector<CheckNode> nodes, const RunConfig& config,
                             const RunOptions& options = {}) {
  return run_suite(CheckGraph::from_nodes(std::move(nodes)), config, options);
}

}  // namespace qpecert
