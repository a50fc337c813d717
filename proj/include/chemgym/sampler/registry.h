//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_SAMPLER_REGISTRY_H_
#define CHEMGYM_SAMPLER_REGISTRY_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chemgym/random.h"
#include "chemgym/task.h"

namespace chemgym {

// Indexable collection of records. Implementations are immutable and safe to
// read from several threads.
class ExampleStore {
public:
  virtual ~ExampleStore() = default;
  virtual std::size_t size() const = 0;
  virtual TaskRecord get(std::size_t index) const = 0;
};

/// JSONL file, one TaskRecord per line (blank lines are skipped). Loading
/// validates every line and keeps only byte offsets; records are re-read on
/// access. Throws SchemaError (position = 1-based line number) and IoError.
class JsonlStore: public ExampleStore {
public:
  explicit JsonlStore(const std::string &path);
  ~JsonlStore() override;
  JsonlStore(const JsonlStore &) = delete;
  JsonlStore &operator=(const JsonlStore &) = delete;

  std::size_t size() const override { return offsets_.size(); }
  TaskRecord get(std::size_t index) const override;
  const std::string &path() const { return path_; }
  // 1-based source line of a record.
  std::size_t line_of(std::size_t index) const { return lines_[index]; }

private:
  std::string path_;
  int fd_ = -1;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> lengths_;
  std::vector<std::size_t> lines_;
};

class MemoryStore: public ExampleStore {
public:
  explicit MemoryStore(std::vector<TaskRecord> records)
      : records_(std::move(records)) { }
  std::size_t size() const override { return records_.size(); }
  TaskRecord get(std::size_t index) const override { return records_[index]; }

private:
  std::vector<TaskRecord> records_;
};

// Records produced on demand by a function of the index.
class GeneratedStore: public ExampleStore {
public:
  GeneratedStore(std::size_t size,
                 std::function<TaskRecord(std::size_t)> make)
      : size_(size), make_(std::move(make)) { }
  std::size_t size() const override { return size_; }
  TaskRecord get(std::size_t index) const override { return make_(index); }

private:
  std::size_t size_;
  std::function<TaskRecord(std::size_t)> make_;
};

std::shared_ptr<ExampleStore> load_jsonl(const std::string &path);

struct TaskEntry {
  std::string task_id;
  std::shared_ptr<const ExampleStore> store;
  // Regression tasks: (min, max) over the task's answers.
  std::optional<std::pair<double, double>> answer_range;
};

struct CategoryEntry {
  std::string name;
  std::vector<TaskEntry> tasks;
};

/// category -> task -> examples. Built with add_task() and then frozen by
/// finalize(); sampling requires a finalized registry.
class Registry {
public:
  // Category names default to the six standard ones.
  Registry();
  explicit Registry(std::vector<std::string> categories);

  /// Registers a task. For regression tasks (decided by the first record)
  /// the answer range is taken from the records' own range when present,
  /// else computed over all answers; DegenerateRange when max <= min or an
  /// answer is not a number. Throws ConfigError for an unknown category or
  /// a duplicate task, EmptyTask for an empty store.
  void add_task(const std::string &category, const std::string &task_id,
                std::shared_ptr<const ExampleStore> store);

  // Throws EmptyCategory if a configured category has no task.
  void finalize();

  const std::vector<CategoryEntry> &categories() const { return categories_; }
  const TaskEntry *find_task(const std::string &task_id) const;

  // Record with the task's answer range filled in.
  TaskRecord record(std::size_t category, std::size_t task,
                    std::size_t example) const;

private:
  std::vector<CategoryEntry> categories_;
  bool finalized_ = false;
};

/// Reads an INI manifest:
///
///   [registry]
///   categories = 2d_molecule, 3d_molecule   ; optional, default: the six
///   [2d_molecule]
///   bbbp = data/bbbp.jsonl                  ; relative to the manifest
///
/// Throws ConfigError, IoError, SchemaError, DegenerateRange, EmptyTask and
/// EmptyCategory.
Registry load_manifest(const std::string &path);

struct Draw {
  std::size_t category;
  std::size_t task;
  std::size_t example;
};

/// Three-stage draw with replacement: category uniform, task uniform within
/// it, example uniform within the task.
Draw sample_draw(const Registry &reg, Rng &rng);
std::vector<TaskRecord> sample_batch(const Registry &reg, std::size_t n,
                                     Rng &rng);

}  // namespace chemgym

#endif  // CHEMGYM_SAMPLER_REGISTRY_H_
