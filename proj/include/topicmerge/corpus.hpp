#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topicmerge/util.hpp"

namespace topicmerge {

struct Topic {
  std::string id;
  std::string name;
  int64_t created_at = 0;
};

// A question may carry several topic tags; answer_count is optional because
// not every dataset exports it.
struct Question {
  std::string id;
  std::string text;
  int64_t created_at = 0;
  std::vector<std::string> topic_ids;
  std::optional<int64_t> answer_count;
};

enum class EventKind { merge, unmerge, parent_add };

// For merge/unmerge, src is the absorbed topic and dst the surviving one.
// For parent_add, src is the child topic and dst the parent being attached.
struct Event {
  EventKind kind = EventKind::merge;
  std::string src;
  std::string dst;
  int64_t at = 0;
};

std::string event_kind_name(EventKind k);
EventKind parse_event_kind(const std::string& s);

class SnapshotView;

class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Topic> topics, std::vector<Question> questions,
         std::vector<Event> events);

  const std::vector<Topic>& topics() const { return topics_; }
  const std::vector<Question>& questions() const { return questions_; }
  // Sorted by time (stable w.r.t. input order for ties).
  const std::vector<Event>& events() const { return events_; }

  bool has_topic(const std::string& id) const { return topic_index_.count(id) > 0; }
  size_t topic_index(const std::string& id) const;  // throws on unknown id
  const Topic& topic(const std::string& id) const { return topics_[topic_index(id)]; }

  // Question indices for a topic, sorted by (created_at, input order).
  const std::vector<size_t>& topic_questions(size_t topic_idx) const {
    return questions_by_topic_[topic_idx];
  }

  SnapshotView snapshot(int64_t cutoff) const;
  SnapshotView full_view() const;

 private:
  std::vector<Topic> topics_;
  std::vector<Question> questions_;
  std::vector<Event> events_;
  std::unordered_map<std::string, size_t> topic_index_;
  std::vector<std::vector<size_t>> questions_by_topic_;

  friend class SnapshotView;
};

// Cheap value type: the corpus plus a time cutoff. Records with
// created_at/at <= cutoff are visible. A cutoff before the first record
// yields an empty view rather than an error.
class SnapshotView {
 public:
  SnapshotView(const Corpus* corpus, int64_t cutoff)
      : corpus_(corpus), cutoff_(cutoff) {}

  const Corpus& corpus() const { return *corpus_; }
  int64_t cutoff() const { return cutoff_; }

  bool topic_visible(const std::string& id) const;
  int64_t question_count(const std::string& topic_id) const;  // throws on unknown id
  // 0 for ids that are not topics at all (used by information content where
  // ontology nodes need not be corpus topics).
  int64_t question_count_or_zero(const std::string& id) const;

  // Visible question indices of a topic (prefix of the time-sorted list).
  std::vector<size_t> visible_questions(const std::string& topic_id) const;

  // Sum of answer_count over visible questions (missing counts contribute 0)
  // and whether any visible question carried answer data.
  std::pair<int64_t, bool> answer_stats(const std::string& topic_id) const;

  // Topics co-tagged with `topic_id` on visible questions, with the number of
  // co-tagged questions per topic. Excludes the topic itself.
  std::unordered_map<std::string, int64_t> cooccurrence(const std::string& topic_id) const;

  std::vector<Event> visible_events() const;

 private:
  size_t visible_prefix(size_t topic_idx) const;
  const Corpus* corpus_;
  int64_t cutoff_;
};

// Loads and validates the three JSONL corpus files. Errors carry the file
// name and line number. Referential integrity: every question topic id and
// every event src/dst must name a known topic.
Corpus load_corpus(const std::string& topics_path, const std::string& questions_path,
                   const std::string& events_path);
// Expects topics.jsonl / questions.jsonl / events.jsonl inside dir.
Corpus load_corpus_dir(const std::string& dir);

// Splits events chronologically: the earliest ceil(n * train_fraction) go to
// train, the rest to test. Ties on time keep their relative order.
std::pair<std::vector<Event>, std::vector<Event>> chrono_split(
    std::vector<Event> events, double train_fraction);

// Merge events that were never reverted: a merge is dropped when a later (or
// simultaneous) unmerge exists for the same unordered topic pair.
std::vector<Event> collect_merge_pairs(const Corpus& corpus);

}  // namespace topicmerge
