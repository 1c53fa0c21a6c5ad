#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "topicmerge/corpus.hpp"
#include "topicmerge/util.hpp"

using namespace topicmerge;
namespace fs = std::filesystem;

namespace {

Topic topic(const std::string& id, const std::string& name, int64_t created) {
  return {id, name, created};
}

Question question(const std::string& id, int64_t created,
                  std::vector<std::string> topics, const std::string& text = "text",
                  std::optional<int64_t> answers = std::nullopt) {
  Question q;
  q.id = id;
  q.text = text;
  q.created_at = created;
  q.topic_ids = std::move(topics);
  q.answer_count = answers;
  return q;
}

Corpus small_corpus() {
  std::vector<Topic> topics{topic("a", "alpha", 100), topic("b", "beta", 200),
                            topic("c", "gamma", 300)};
  std::vector<Question> questions{
      question("q1", 150, {"a"}, "first", 2),
      question("q2", 250, {"a", "b"}, "second"),
      question("q3", 350, {"b", "a"}, "third", 5),
      question("q4", 400, {"c", "a", "b"}, "fourth", 0),
  };
  std::vector<Event> events{
      {EventKind::parent_add, "a", "c", 300},
      {EventKind::merge, "b", "a", 500},
  };
  return Corpus(std::move(topics), std::move(questions), std::move(events));
}

std::string temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("topicmerge_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

}  // namespace

TEST_CASE("corpus validates its inputs") {
  CHECK_THROWS_WITH_AS(
      Corpus({topic("a", "x", 1), topic("a", "y", 2)}, {}, {}),
      doctest::Contains("duplicate topic"), Error);
  CHECK_THROWS_WITH_AS(Corpus({topic("a", "x", 1)}, {question("q", 1, {})}, {}),
                       doctest::Contains("q"), Error);
  CHECK_THROWS_WITH_AS(Corpus({topic("a", "x", 1)}, {question("q", 1, {"zz"})}, {}),
                       doctest::Contains("zz"), Error);
  CHECK_THROWS_WITH_AS(
      Corpus({topic("a", "x", 1)}, {}, {{EventKind::merge, "a", "zz", 1}}),
      doctest::Contains("zz"), Error);
  CHECK_THROWS_WITH_AS(
      Corpus({topic("a", "x", 1)}, {}, {{EventKind::merge, "a", "a", 1}}),
      doctest::Contains("a"), Error);
}

TEST_CASE("events are time sorted with stable ties") {
  std::vector<Topic> topics{topic("a", "x", 1), topic("b", "y", 1), topic("c", "z", 1)};
  std::vector<Event> events{
      {EventKind::merge, "a", "b", 50},
      {EventKind::parent_add, "a", "c", 10},
      {EventKind::unmerge, "a", "b", 50},
  };
  Corpus corpus(topics, {}, events);
  REQUIRE(corpus.events().size() == 3);
  CHECK(corpus.events()[0].at == 10);
  CHECK(corpus.events()[1].kind == EventKind::merge);   // tie keeps input order
  CHECK(corpus.events()[2].kind == EventKind::unmerge);
}

TEST_CASE("snapshot visibility and counts") {
  Corpus corpus = small_corpus();
  SnapshotView early = corpus.snapshot(150);
  CHECK(early.topic_visible("a"));
  CHECK_FALSE(early.topic_visible("b"));
  CHECK(early.question_count("a") == 1);
  CHECK(early.question_count("b") == 0);
  CHECK_THROWS_AS(early.question_count("zz"), Error);
  CHECK(early.question_count_or_zero("zz") == 0);

  SnapshotView mid = corpus.snapshot(350);
  CHECK(mid.question_count("a") == 3);
  CHECK(mid.question_count("b") == 2);
  CHECK(mid.visible_questions("a").size() == 3);

  SnapshotView full = corpus.full_view();
  CHECK(full.question_count("a") == 4);
  CHECK(full.question_count("c") == 1);
}

TEST_CASE("answer stats track missing data") {
  Corpus corpus = small_corpus();
  auto [total_a, any_a] = corpus.full_view().answer_stats("a");
  CHECK(total_a == 7);  // 2 + missing + 5 + 0
  CHECK(any_a);
  auto [total_at_250, any_at_250] = corpus.snapshot(250).answer_stats("b");
  CHECK(total_at_250 == 0);  // only q2, which has no answer data
  CHECK_FALSE(any_at_250);
}

TEST_CASE("cooccurrence counts co-tagged questions once each") {
  Corpus corpus = small_corpus();
  auto co = corpus.full_view().cooccurrence("a");
  CHECK(co.size() == 2);
  CHECK(co.at("b") == 3);
  CHECK(co.at("c") == 1);
  CHECK(co.count("a") == 0);

  auto early = corpus.snapshot(150).cooccurrence("a");
  CHECK(early.empty());
}

TEST_CASE("visible events respect the cutoff") {
  Corpus corpus = small_corpus();
  CHECK(corpus.snapshot(299).visible_events().size() == 0);
  CHECK(corpus.snapshot(300).visible_events().size() == 1);
  CHECK(corpus.full_view().visible_events().size() == 2);
}

TEST_CASE("chrono split takes the ceiling on the train side") {
  std::vector<Event> events;
  for (int i = 0; i < 10; ++i)
    events.push_back({EventKind::merge, "a", "b", i * 100});
  auto [train, test] = chrono_split(events, 0.7);
  CHECK(train.size() == 7);
  CHECK(test.size() == 3);
  CHECK(train.back().at < test.front().at);

  auto [train5, test5] = chrono_split({events.begin(), events.begin() + 5}, 0.5);
  CHECK(train5.size() == 3);  // ceil(2.5)
  CHECK(test5.size() == 2);

  CHECK_THROWS_AS(chrono_split({}, 0.7), Error);
  CHECK_THROWS_AS(chrono_split(events, 0.0), Error);
  CHECK_THROWS_AS(chrono_split(events, 1.5), Error);
}

TEST_CASE("chrono split sorts by time first") {
  std::vector<Event> events{
      {EventKind::merge, "a", "b", 500},
      {EventKind::merge, "c", "d", 100},
      {EventKind::merge, "e", "f", 300},
  };
  auto [train, test] = chrono_split(events, 0.6);  // ceil(1.8) = 2
  REQUIRE(train.size() == 2);
  CHECK(train[0].at == 100);
  CHECK(train[1].at == 300);
  CHECK(test[0].at == 500);
}

TEST_CASE("collect_merge_pairs drops reverted merges") {
  std::vector<Topic> topics{topic("a", "w", 1), topic("b", "x", 1),
                            topic("c", "y", 1), topic("d", "z", 1)};
  std::vector<Event> events{
      {EventKind::merge, "a", "b", 100},    // kept
      {EventKind::merge, "c", "d", 100},    // reverted later
      {EventKind::unmerge, "d", "c", 200},  // reversed order, same unordered pair
      {EventKind::merge, "a", "c", 300},    // unmerged at the same instant
      {EventKind::unmerge, "a", "c", 300},
  };
  Corpus corpus(topics, {}, events);
  std::vector<Event> kept = collect_merge_pairs(corpus);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].src == "a");
  CHECK(kept[0].dst == "b");
}

TEST_CASE("jsonl round trip through the loader") {
  std::string dir = temp_dir("corpus_io");
  write_file(dir + "/topics.jsonl",
             R"({"id":"a","name":"alpha","created_at":"2014-01-01T00:00:00Z"})"
             "\n"
             R"({"id":"b","name":"beta","created_at":1388620800})"
             "\n");
  write_file(dir + "/questions.jsonl",
             R"({"id":"q1","text":"how to alpha","created_at":"2014-01-02T00:00:00Z","topic_ids":["a","b"],"answer_count":3})"
             "\n");
  write_file(dir + "/events.jsonl",
             R"({"kind":"merge","src":"b","dst":"a","at":"2014-02-01T00:00:00Z"})"
             "\n");
  Corpus corpus = load_corpus_dir(dir);
  CHECK(corpus.topics().size() == 2);
  CHECK(corpus.topic("a").created_at == 1388534400);
  CHECK(corpus.topic("b").created_at == 1388620800);
  CHECK(corpus.questions().size() == 1);
  CHECK(corpus.questions()[0].answer_count == 3);
  CHECK(corpus.events().size() == 1);
  CHECK(corpus.events()[0].kind == EventKind::merge);
  fs::remove_all(dir);
}

TEST_CASE("loader errors carry file and line") {
  std::string dir = temp_dir("corpus_bad");
  write_file(dir + "/topics.jsonl", "{\"id\":\"a\",\"name\":\"x\",\"created_at\":1}\nnot json\n");
  write_file(dir + "/questions.jsonl", "");
  write_file(dir + "/events.jsonl", "");
  CHECK_THROWS_WITH_AS(load_corpus_dir(dir), doctest::Contains("line 2"), Error);
  fs::remove_all(dir);
}

TEST_CASE("event kind names round trip") {
  for (EventKind k : {EventKind::merge, EventKind::unmerge, EventKind::parent_add})
    CHECK(parse_event_kind(event_kind_name(k)) == k);
  CHECK_THROWS_AS(parse_event_kind("explode"), Error);
}
