#include "topicmerge/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "json.hpp"

namespace topicmerge {

using nlohmann::json;

std::string event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::merge: return "merge";
    case EventKind::unmerge: return "unmerge";
    case EventKind::parent_add: return "parent_add";
  }
  return "?";
}

EventKind parse_event_kind(const std::string& s) {
  if (s == "merge") return EventKind::merge;
  if (s == "unmerge") return EventKind::unmerge;
  if (s == "parent_add") return EventKind::parent_add;
  throw Error("unknown event kind: \"" + s + "\"");
}

Corpus::Corpus(std::vector<Topic> topics, std::vector<Question> questions,
               std::vector<Event> events)
    : topics_(std::move(topics)),
      questions_(std::move(questions)),
      events_(std::move(events)) {
  topic_index_.reserve(topics_.size());
  for (size_t i = 0; i < topics_.size(); ++i) {
    if (!topic_index_.emplace(topics_[i].id, i).second)
      throw Error("duplicate topic id: " + topics_[i].id);
  }
  for (const auto& q : questions_) {
    if (q.topic_ids.empty())
      throw Error("question " + q.id + " has no topic ids");
    for (const auto& t : q.topic_ids)
      if (!topic_index_.count(t))
        throw Error("question " + q.id + " references unknown topic " + t);
  }
  for (const auto& e : events_) {
    if (!topic_index_.count(e.src))
      throw Error("event references unknown topic " + e.src);
    if (!topic_index_.count(e.dst))
      throw Error("event references unknown topic " + e.dst);
    if (e.src == e.dst)
      throw Error("event src and dst are the same topic: " + e.src);
  }
  std::stable_sort(events_.begin(), events_.end(),
                   [](const Event& a, const Event& b) { return a.at < b.at; });

  questions_by_topic_.assign(topics_.size(), {});
  std::vector<size_t> order(questions_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return questions_[a].created_at < questions_[b].created_at;
  });
  for (size_t qi : order) {
    std::unordered_set<std::string> seen;
    for (const auto& t : questions_[qi].topic_ids) {
      if (!seen.insert(t).second) continue;
      questions_by_topic_[topic_index_.at(t)].push_back(qi);
    }
  }
}

size_t Corpus::topic_index(const std::string& id) const {
  auto it = topic_index_.find(id);
  if (it == topic_index_.end()) throw Error("unknown topic id: " + id);
  return it->second;
}

SnapshotView Corpus::snapshot(int64_t cutoff) const { return SnapshotView(this, cutoff); }

SnapshotView Corpus::full_view() const {
  return SnapshotView(this, std::numeric_limits<int64_t>::max());
}

size_t SnapshotView::visible_prefix(size_t topic_idx) const {
  const auto& qs = corpus_->questions_by_topic_[topic_idx];
  auto it = std::upper_bound(qs.begin(), qs.end(), cutoff_, [&](int64_t c, size_t qi) {
    return c < corpus_->questions_[qi].created_at;
  });
  return static_cast<size_t>(it - qs.begin());
}

bool SnapshotView::topic_visible(const std::string& id) const {
  auto it = corpus_->topic_index_.find(id);
  if (it == corpus_->topic_index_.end()) return false;
  return corpus_->topics_[it->second].created_at <= cutoff_;
}

int64_t SnapshotView::question_count(const std::string& topic_id) const {
  return static_cast<int64_t>(visible_prefix(corpus_->topic_index(topic_id)));
}

int64_t SnapshotView::question_count_or_zero(const std::string& id) const {
  auto it = corpus_->topic_index_.find(id);
  if (it == corpus_->topic_index_.end()) return 0;
  return static_cast<int64_t>(visible_prefix(it->second));
}

std::vector<size_t> SnapshotView::visible_questions(const std::string& topic_id) const {
  size_t ti = corpus_->topic_index(topic_id);
  const auto& qs = corpus_->questions_by_topic_[ti];
  return std::vector<size_t>(qs.begin(), qs.begin() + visible_prefix(ti));
}

std::pair<int64_t, bool> SnapshotView::answer_stats(const std::string& topic_id) const {
  size_t ti = corpus_->topic_index(topic_id);
  const auto& qs = corpus_->questions_by_topic_[ti];
  size_t n = visible_prefix(ti);
  int64_t total = 0;
  bool any = false;
  for (size_t i = 0; i < n; ++i) {
    const auto& q = corpus_->questions_[qs[i]];
    if (q.answer_count) {
      total += *q.answer_count;
      any = true;
    }
  }
  return {total, any};
}

std::unordered_map<std::string, int64_t> SnapshotView::cooccurrence(
    const std::string& topic_id) const {
  size_t ti = corpus_->topic_index(topic_id);
  const auto& qs = corpus_->questions_by_topic_[ti];
  size_t n = visible_prefix(ti);
  std::unordered_map<std::string, int64_t> out;
  for (size_t i = 0; i < n; ++i) {
    const auto& q = corpus_->questions_[qs[i]];
    std::unordered_set<std::string> seen;
    for (const auto& t : q.topic_ids) {
      if (t == topic_id || !seen.insert(t).second) continue;
      ++out[t];
    }
  }
  return out;
}

std::vector<Event> SnapshotView::visible_events() const {
  const auto& es = corpus_->events_;
  auto it = std::upper_bound(es.begin(), es.end(), cutoff_,
                             [](int64_t c, const Event& e) { return c < e.at; });
  return std::vector<Event>(es.begin(), it);
}

namespace {

int64_t get_time(const json& j, const char* key, const std::string& ctx) {
  const auto& v = j.at(key);
  if (v.is_number_integer()) return v.get<int64_t>();
  if (v.is_string()) return parse_iso8601(v.get<std::string>());
  throw Error(ctx + ": field \"" + key + "\" must be ISO-8601 string or epoch integer");
}

template <typename Fn>
void for_each_jsonl(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      fn(j);
    } catch (const std::exception& e) {
      throw Error(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace

Corpus load_corpus(const std::string& topics_path, const std::string& questions_path,
                   const std::string& events_path) {
  std::vector<Topic> topics;
  for_each_jsonl(topics_path, [&](const json& j) {
    Topic t;
    t.id = j.at("id").get<std::string>();
    t.name = j.at("name").get<std::string>();
    t.created_at = get_time(j, "created_at", "topic " + t.id);
    if (t.id.empty()) throw Error("empty topic id");
    topics.push_back(std::move(t));
  });

  std::vector<Question> questions;
  for_each_jsonl(questions_path, [&](const json& j) {
    Question q;
    q.id = j.at("id").get<std::string>();
    q.text = j.at("text").get<std::string>();
    q.created_at = get_time(j, "created_at", "question " + q.id);
    q.topic_ids = j.at("topic_ids").get<std::vector<std::string>>();
    if (j.contains("answer_count")) q.answer_count = j.at("answer_count").get<int64_t>();
    questions.push_back(std::move(q));
  });

  std::vector<Event> events;
  for_each_jsonl(events_path, [&](const json& j) {
    Event e;
    e.kind = parse_event_kind(j.at("kind").get<std::string>());
    e.src = j.at("src").get<std::string>();
    e.dst = j.at("dst").get<std::string>();
    e.at = get_time(j, "at", "event");
    events.push_back(std::move(e));
  });

  return Corpus(std::move(topics), std::move(questions), std::move(events));
}

Corpus load_corpus_dir(const std::string& dir) {
  return load_corpus(dir + "/topics.jsonl", dir + "/questions.jsonl",
                     dir + "/events.jsonl");
}

std::pair<std::vector<Event>, std::vector<Event>> chrono_split(
    std::vector<Event> events, double train_fraction) {
  if (events.empty()) throw Error("chrono_split: empty event list");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error("chrono_split: train_fraction must be in (0, 1)");
  std::stable_sort(events.begin(), events.end(),
                   [](const Event& a, const Event& b) { return a.at < b.at; });
  size_t n_train = static_cast<size_t>(
      std::ceil(static_cast<double>(events.size()) * train_fraction));
  n_train = std::min(n_train, events.size());
  std::vector<Event> train(events.begin(), events.begin() + n_train);
  std::vector<Event> test(events.begin() + n_train, events.end());
  return {std::move(train), std::move(test)};
}

std::vector<Event> collect_merge_pairs(const Corpus& corpus) {
  auto key = [](const Event& e) {
    return e.src < e.dst ? e.src + "\x1f" + e.dst : e.dst + "\x1f" + e.src;
  };
  std::unordered_map<std::string, std::vector<int64_t>> unmerges;
  for (const auto& e : corpus.events())
    if (e.kind == EventKind::unmerge) unmerges[key(e)].push_back(e.at);
  std::vector<Event> out;
  for (const auto& e : corpus.events()) {
    if (e.kind != EventKind::merge) continue;
    auto it = unmerges.find(key(e));
    bool reverted = false;
    if (it != unmerges.end())
      for (int64_t t : it->second)
        if (t >= e.at) reverted = true;
    if (!reverted) out.push_back(e);
  }
  return out;
}

}  // namespace topicmerge
