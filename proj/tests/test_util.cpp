#include <cmath>
#include <set>

#include "doctest.h"
#include "topicmerge/util.hpp"

using namespace topicmerge;

TEST_CASE("iso8601 parsing and formatting") {
  CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601("2014-01-01T00:00:00Z") == 1388534400);
  CHECK(parse_iso8601("2014-01-01 00:00:00") == 1388534400);
  CHECK(parse_iso8601("2014-01-01") == 1388534400);
  CHECK(parse_iso8601("1969-12-31T23:59:59Z") == -1);
  CHECK(format_iso8601(1388534400) == "2014-01-01T00:00:00Z");
  CHECK(format_iso8601(0) == "1970-01-01T00:00:00Z");

  for (int64_t t : {int64_t{0}, int64_t{1388534400}, int64_t{1696118455}})
    CHECK(parse_iso8601(format_iso8601(t)) == t);

  CHECK_THROWS_AS(parse_iso8601("not a date"), Error);
  CHECK_THROWS_AS(parse_iso8601("2014-13-01"), Error);
  CHECK_THROWS_AS(parse_iso8601("2014-02-30"), Error);
  CHECK_THROWS_AS(parse_iso8601("2014-01-01T25:00:00Z"), Error);
  CHECK_THROWS_AS(parse_iso8601(""), Error);
}

TEST_CASE("civil date conversion round trips") {
  CHECK(days_from_civil(1970, 1, 1) == 0);
  CHECK(days_from_civil(2000, 3, 1) == 11017);
  for (int64_t day : {int64_t{-1000}, int64_t{0}, int64_t{19000}, int64_t{25000}}) {
    int64_t y;
    unsigned m, d;
    civil_from_days(day, y, m, d);
    CHECK(days_from_civil(y, m, d) == day);
  }
}

TEST_CASE("rng reproducibility") {
  Rng a(42), b(42), c(43);
  bool same = true, diff = false;
  for (int i = 0; i < 100; ++i) {
    uint64_t va = a.next_u64(), vb = b.next_u64(), vc = c.next_u64();
    same = same && va == vb;
    diff = diff || va != vc;
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("rng uniform stays in range") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform_pos();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
  for (int i = 0; i < 2000; ++i) CHECK(rng.below(7) < 7);
  for (int i = 0; i < 2000; ++i) {
    int64_t v = rng.range(-3, 3);
    CHECK(v >= -3);
    CHECK(v <= 3);
  }
}

TEST_CASE("rng below covers every residue") {
  Rng rng(11);
  std::set<uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(rng.below(5));
  CHECK(seen == std::set<uint64_t>{0, 1, 2, 3, 4});
}

TEST_CASE("shuffle is a permutation") {
  Rng rng(3);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[static_cast<size_t>(i)] = i;
  std::vector<int> shuffled = v;
  rng.shuffle(shuffled);
  CHECK(shuffled != v);
  std::set<int> s(shuffled.begin(), shuffled.end());
  CHECK(s.size() == 50);
}

TEST_CASE("gaussian and lognormal moments") {
  Rng rng(19);
  double sum = 0, sq = 0;
  int n = 40000;
  for (int i = 0; i < n; ++i) {
    double g = rng.gaussian();
    sum += g;
    sq += g * g;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.05);

  double lsum = 0;
  for (int i = 0; i < n; ++i) lsum += rng.lognormal_mean(50.0, 0.5);
  CHECK(std::abs(lsum / n - 50.0) < 2.0);
}

TEST_CASE("poisson mean") {
  Rng rng(23);
  double sum = 0;
  int n = 20000;
  for (int i = 0; i < n; ++i) sum += static_cast<double>(rng.poisson(1.8));
  CHECK(std::abs(sum / n - 1.8) < 0.05);
}

TEST_CASE("split on a delimiter") {
  CHECK(split("a,b,c", ',') == std::vector<std::string>{"a", "b", "c"});
  CHECK(split("a,,c", ',') == std::vector<std::string>{"a", "", "c"});
  CHECK(split("", ',') == std::vector<std::string>{""});
  CHECK(split("abc", ',') == std::vector<std::string>{"abc"});
}

TEST_CASE("double formatting round trips") {
  for (double v : {0.0, 1.0, -1.5, 0.1, 1e-9, 3.141592653589793, 1e300}) {
    CHECK(std::stod(fmt_double(v)) == v);
  }
  CHECK(fmt_double_short(0.25) == "0.25");
}

TEST_CASE("file io errors name the path") {
  CHECK_THROWS_WITH_AS(read_file("/nonexistent/definitely/missing.txt"),
                       doctest::Contains("missing.txt"), Error);
}
