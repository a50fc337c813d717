//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/sampler/registry.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "chemgym/error.h"

namespace chemgym {

namespace {

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::optional<double> parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ')
    s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ')
    s.remove_suffix(1);
  double v;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty() ||
      !std::isfinite(v))
    return std::nullopt;
  return v;
}

}  // namespace

JsonlStore::JsonlStore(const std::string &path): path_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path + ": " + std::strerror(errno));
  std::string line;
  std::uint64_t offset = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::uint64_t start = offset;
    offset += line.size() + 1;
    if (blank(line))
      continue;
    parse_task(line, lineno);
    offsets_.push_back(start);
    lengths_.push_back(static_cast<std::uint32_t>(line.size()));
    lines_.push_back(lineno);
  }
  if (in.bad())
    throw IoError("read error on " + path);
  fd_ = ::open(path.c_str(), O_RDONLY);
  if (fd_ < 0)
    throw IoError("cannot open " + path + ": " + std::strerror(errno));
}

JsonlStore::~JsonlStore() {
  if (fd_ >= 0)
    ::close(fd_);
}

TaskRecord JsonlStore::get(std::size_t index) const {
  std::string buf(lengths_[index], '\0');
  std::size_t done = 0;
  while (done < buf.size()) {
    ssize_t n = ::pread(fd_, buf.data() + done, buf.size() - done,
                        static_cast<off_t>(offsets_[index] + done));
    if (n <= 0)
      throw IoError("read error on " + path_);
    done += static_cast<std::size_t>(n);
  }
  return parse_task(buf, lines_[index]);
}

std::shared_ptr<ExampleStore> load_jsonl(const std::string &path) {
  return std::make_shared<JsonlStore>(path);
}

Registry::Registry()
    : Registry(std::vector<std::string>(kDefaultCategories.begin(),
                                        kDefaultCategories.end())) { }

Registry::Registry(std::vector<std::string> categories) {
  for (auto &name : categories) {
    for (const auto &c : categories_)
      if (c.name == name)
        throw ConfigError("duplicate category '" + name + "'");
    categories_.push_back(CategoryEntry { std::move(name), {} });
  }
}

void Registry::add_task(const std::string &category, const std::string &task_id,
                        std::shared_ptr<const ExampleStore> store) {
  if (finalized_)
    throw ConfigError("registry is already finalized");
  auto it = std::find_if(categories_.begin(), categories_.end(),
                         [&](const auto &c) { return c.name == category; });
  if (it == categories_.end())
    throw ConfigError("unknown category '" + category + "'");
  if (find_task(task_id) != nullptr)
    throw ConfigError("duplicate task '" + task_id + "'");
  if (store == nullptr || store->size() == 0)
    throw EmptyTask("task '" + task_id + "' has no examples");

  TaskEntry entry { task_id, std::move(store), std::nullopt };
  TaskRecord first = entry.store->get(0);
  if (first.answer_type.kind == AnswerKind::kRegression) {
    if (first.answer_type.range) {
      entry.answer_range = first.answer_type.range;
    } else {
      double lo = INFINITY, hi = -INFINITY;
      for (std::size_t i = 0; i < entry.store->size(); ++i) {
        TaskRecord r = i == 0 ? first : entry.store->get(i);
        std::optional<double> v = parse_number(r.answer);
        if (!v)
          throw DegenerateRange("task '" + task_id + "': answer '" + r.answer +
                                "' is not a number");
        lo = std::min(lo, *v);
        hi = std::max(hi, *v);
      }
      entry.answer_range = std::make_pair(lo, hi);
    }
    if (!(entry.answer_range->second > entry.answer_range->first))
      throw DegenerateRange("task '" + task_id + "' has an empty answer range");
  }
  it->tasks.push_back(std::move(entry));
}

void Registry::finalize() {
  for (const auto &c : categories_)
    if (c.tasks.empty())
      throw EmptyCategory("category '" + c.name + "' has no tasks");
  finalized_ = true;
}

const TaskEntry *Registry::find_task(const std::string &task_id) const {
  for (const auto &c : categories_)
    for (const auto &t : c.tasks)
      if (t.task_id == task_id)
        return &t;
  return nullptr;
}

TaskRecord Registry::record(std::size_t category, std::size_t task,
                            std::size_t example) const {
  const TaskEntry &t = categories_.at(category).tasks.at(task);
  TaskRecord r = t.store->get(example);
  if (t.answer_range && r.answer_type.kind == AnswerKind::kRegression)
    r.answer_type.range = t.answer_range;
  return r;
}

Registry load_manifest(const std::string &path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error &e) {
    if (e.line() == 0)
      throw IoError("cannot read manifest " + path);
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  std::vector<std::string> categories(kDefaultCategories.begin(),
                                      kDefaultCategories.end());
  if (auto reg = tree.get_child_optional("registry")) {
    if (auto list = reg->get_optional<std::string>("categories")) {
      categories.clear();
      std::string item;
      std::string s = *list + ",";
      for (char c : s) {
        if (c != ',') {
          item += c;
          continue;
        }
        boost::algorithm::trim(item);
        if (!item.empty())
          categories.push_back(item);
        item.clear();
      }
    }
  }
  Registry reg(categories);
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (const auto &[section, body] : tree) {
    if (section == "registry")
      continue;
    if (std::find(categories.begin(), categories.end(), section) ==
        categories.end())
      throw ConfigError("manifest section '" + section +
                        "' is not a configured category");
    for (const auto &[task, value] : body) {
      std::filesystem::path file = value.data();
      if (file.is_relative())
        file = base / file;
      reg.add_task(section, task, load_jsonl(file.string()));
    }
  }
  reg.finalize();
  return reg;
}

Draw sample_draw(const Registry &reg, Rng &rng) {
  const auto &cats = reg.categories();
  if (cats.empty())
    throw EmptyCategory("registry has no categories");
  for (const auto &c : cats)
    if (c.tasks.empty())
      throw EmptyCategory("category '" + c.name + "' has no tasks");
  Draw d;
  d.category = rng.uniform_index(cats.size());
  const auto &tasks = cats[d.category].tasks;
  d.task = rng.uniform_index(tasks.size());
  std::size_t n = tasks[d.task].store->size();
  if (n == 0)
    throw EmptyTask("task '" + tasks[d.task].task_id + "' has no examples");
  d.example = rng.uniform_index(n);
  return d;
}

std::vector<TaskRecord> sample_batch(const Registry &reg, std::size_t n,
                                     Rng &rng) {
  std::vector<TaskRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Draw d = sample_draw(reg, rng);
    out.push_back(reg.record(d.category, d.task, d.example));
  }
  return out;
}

}  // namespace chemgym
