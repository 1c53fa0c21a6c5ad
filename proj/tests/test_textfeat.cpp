#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "topicmerge/textfeat.hpp"
#include "topicmerge/util.hpp"

using namespace topicmerge;

namespace {

NGramMultiset bag(const std::vector<std::string>& tokens, int n = 1) {
  return ngrams(tokens, n);
}

std::vector<std::string> random_tokens(Rng& rng, size_t max_len,
                                       const std::vector<std::string>& vocab) {
  std::vector<std::string> out;
  size_t len = rng.below(max_len + 1);
  for (size_t i = 0; i < len; ++i) out.push_back(vocab[rng.below(vocab.size())]);
  return out;
}

}  // namespace

TEST_CASE("tokenize lowercases and splits on non-alphanumerics") {
  CHECK(tokenize("3D-printing 101") == std::vector<std::string>{"3d", "printing", "101"});
  CHECK(tokenize("Hello, World!") == std::vector<std::string>{"hello", "world"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("   ") == std::vector<std::string>{});
  CHECK(tokenize("a_b") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("C++20") == std::vector<std::string>{"c", "20"});
}

TEST_CASE("tokenize keeps multibyte sequences together") {
  CHECK(tokenize("caf\xc3\xa9 time") == std::vector<std::string>{"caf\xc3\xa9", "time"});
}

TEST_CASE("tokenize honors stopwords") {
  std::unordered_set<std::string> stop{"the", "a"};
  CHECK(tokenize("The cat and a dog", &stop) ==
        std::vector<std::string>{"cat", "and", "dog"});
}

TEST_CASE("ngrams build space-joined multisets") {
  NGramMultiset uni = bag({"a", "b", "a"});
  CHECK(uni.total == 3);
  CHECK(uni.support() == 2);
  CHECK(uni.counts.at("a") == 2);

  NGramMultiset bi = bag({"a", "b", "a", "b"}, 2);
  CHECK(bi.total == 3);
  CHECK(bi.counts.at("a b") == 2);
  CHECK(bi.counts.at("b a") == 1);

  CHECK(bag({"a"}, 2).total == 0);
  CHECK(bag({}, 1).total == 0);
}

TEST_CASE("overlap frozen examples") {
  NGramMultiset a = bag({"x", "y", "z"});
  NGramMultiset b = bag({"y", "z", "w"});
  CHECK(overlap(a, b, OverlapMode::unweighted) == doctest::Approx(2.0 / 3.0));

  // Repeats matter for the weighted coefficient but not the unweighted one.
  NGramMultiset c = bag({"x", "x", "x"});
  NGramMultiset d = bag({"x", "y", "z"});
  CHECK(overlap(c, d, OverlapMode::unweighted) == 1.0);
  CHECK(overlap(c, d, OverlapMode::weighted) == doctest::Approx(1.0 / 3.0));

  // The support-denominator reading can exceed 1.
  NGramMultiset e = bag({"x", "x", "x", "y"});
  NGramMultiset f = bag({"x", "x", "x", "x"});
  CHECK(overlap(e, f, OverlapMode::weighted_support_denom) == doctest::Approx(3.0));

  CHECK(overlap(bag({}), d) == 0.0);
  CHECK(overlap(d, bag({})) == 0.0);
}

TEST_CASE("overlap matches the brute-force oracle on random multisets") {
  Rng rng(1234);
  std::vector<std::string> vocab{"a", "b", "c", "d"};
  for (int i = 0; i < 300; ++i) {
    auto ta = random_tokens(rng, 6, vocab);
    auto tb = random_tokens(rng, 6, vocab);
    NGramMultiset a = bag(ta), b = bag(tb);
    CHECK(overlap(a, b, OverlapMode::unweighted) ==
          doctest::Approx(oracles::overlap_unweighted(ta, tb)).epsilon(1e-12));
    CHECK(overlap(a, b, OverlapMode::weighted) ==
          doctest::Approx(oracles::overlap_weighted(ta, tb)).epsilon(1e-12));
    CHECK(overlap(a, b, OverlapMode::weighted_support_denom) ==
          doctest::Approx(oracles::overlap_weighted_support_denom(ta, tb)).epsilon(1e-12));
  }
}

TEST_CASE("jaro winkler frozen values") {
  CHECK(jaro_winkler("MARTHA", "MARHTA") == doctest::Approx(0.96111).epsilon(1e-5));
  CHECK(jaro_winkler("DWAYNE", "DUANE") == doctest::Approx(0.84).epsilon(1e-9));
  CHECK(jaro_winkler("DIXON", "DICKSONX") == doctest::Approx(0.813333).epsilon(1e-5));
  CHECK(jaro_winkler("same", "same") == 1.0);
  CHECK(jaro_winkler("", "") == 1.0);
  CHECK(jaro_winkler("x", "") == 0.0);
  CHECK(jaro_winkler("abc", "xyz") == 0.0);
  CHECK(jaro_winkler("ABC", "abc") < 1.0);  // case-sensitive
}

TEST_CASE("jaro winkler matches a reference implementation") {
  Rng rng(777);
  std::vector<std::string> pool;
  const char* letters = "abcde";
  for (int i = 0; i < 200; ++i) {
    std::string s;
    size_t len = rng.below(9);
    for (size_t j = 0; j < len; ++j) s += letters[rng.below(5)];
    pool.push_back(s);
  }
  for (int i = 0; i < 200; ++i) {
    const std::string& a = pool[rng.below(pool.size())];
    const std::string& b = pool[rng.below(pool.size())];
    double got = jaro_winkler(a, b);
    CHECK(got == doctest::Approx(oracles::jaro_winkler_ref(a, b)).epsilon(1e-12));
    CHECK(got == doctest::Approx(jaro_winkler(b, a)).epsilon(1e-12));  // symmetric
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("abbreviation pair rules") {
  CHECK(abbreviation_pair("ICC", "International Cricket Council"));
  CHECK(abbreviation_pair("International Cricket Council", "ICC"));
  CHECK(abbreviation_pair("icc", "international cricket council"));  // rule 1 ignores case
  CHECK_FALSE(abbreviation_pair("club", "nightclub"));
  CHECK_FALSE(abbreviation_pair("USA", "United States"));
  CHECK(abbreviation_pair("USA", "United States of America"));  // every letter an initial
  CHECK(abbreviation_pair("U S A", "United States of America"));
  CHECK_FALSE(abbreviation_pair("I", "International"));          // needs >= 2 letters
  CHECK_FALSE(abbreviation_pair("ABC", "Alphabet"));             // expanded needs >= 2 words
  CHECK_FALSE(abbreviation_pair("", ""));
}

TEST_CASE("tfidf index and cosine") {
  std::unordered_map<std::string, int64_t> d1{{"cat", 2}, {"dog", 1}};
  std::unordered_map<std::string, int64_t> d2{{"cat", 1}, {"fish", 3}};
  std::unordered_map<std::string, int64_t> d3{{"bird", 1}};
  TfidfIndex idx = build_tfidf({&d1, &d2, &d3});
  CHECK(idx.n_docs == 3);
  CHECK(idx.df.at("cat") == 2);
  CHECK(idx.idf("cat") == doctest::Approx(std::log(3.0 / 2.0) + 1.0));
  CHECK(idx.idf("unseen") == doctest::Approx(std::log(3.0) + 1.0));

  std::map<std::string, int64_t> df_ref(idx.df.begin(), idx.df.end());
  CHECK(tfidf_cosine(idx, d1, d2) ==
        doctest::Approx(oracles::tfidf_cosine_ref(
                            3, df_ref, {{"cat", 2}, {"dog", 1}}, {{"cat", 1}, {"fish", 3}}))
            .epsilon(1e-12));
  CHECK(tfidf_cosine(idx, d1, d1) == doctest::Approx(1.0));
  CHECK(tfidf_cosine(idx, d1, d3) == 0.0);
  CHECK(tfidf_cosine(idx, {}, d1) == 0.0);
}

TEST_CASE("top tfidf terms are deterministic under ties") {
  std::unordered_map<std::string, int64_t> d1{{"b", 1}, {"a", 1}, {"c", 1}};
  TfidfIndex idx = build_tfidf({&d1});
  auto top = top_tfidf_terms(idx, d1, 2);
  CHECK(top == std::vector<std::string>{"a", "b"});  // equal scores: lexicographic
  CHECK(top_tfidf_terms(idx, d1, 10).size() == 3);
}

TEST_CASE("rule tagger covers the coarse classes") {
  RulePosTagger tagger;
  CHECK(tagger.tag("the") == PosTag::det);
  CHECK(tagger.tag("they") == PosTag::pron);
  CHECK(tagger.tag("under") == PosTag::adp);
  CHECK(tagger.tag("and") == PosTag::conj);
  CHECK(tagger.tag("not") == PosTag::part);
  CHECK(tagger.tag("wow") == PosTag::intj);
  CHECK(tagger.tag("42") == PosTag::num);
  CHECK(tagger.tag("3d") == PosTag::num);
  CHECK(tagger.tag("quickly") == PosTag::adv);
  CHECK(tagger.tag("running") == PosTag::verb);
  CHECK(tagger.tag("happiness") == PosTag::noun);
  CHECK(tagger.tag("beautiful") == PosTag::adj);
  CHECK(tagger.tag("table") == PosTag::noun);  // default
}

TEST_CASE("pos histogram and cosine") {
  RulePosTagger tagger;
  auto h1 = pos_histogram({"the", "cat", "runs", "quickly"}, tagger);
  int64_t total = 0;
  for (int64_t v : h1) total += v;
  CHECK(total == 4);

  std::array<int64_t, kNumPosTags> a{}, b{};
  a[0] = 3;
  a[1] = 4;
  b[0] = 4;
  b[1] = 3;
  CHECK(pos_cosine(a, b) == doctest::Approx(24.0 / 25.0));
  CHECK(pos_cosine(a, a) == doctest::Approx(1.0));
  std::array<int64_t, kNumPosTags> zero{};
  CHECK(pos_cosine(a, zero) == 0.0);
}

TEST_CASE("frequency bands pick the documented slices") {
  std::unordered_map<std::string, int64_t> counts{
      {"alpha", 10}, {"beta", 10}, {"gamma", 5}, {"delta", 2},
      {"epsilon", 2}, {"zeta", 1},
  };
  // D = 6 -> k = max(1, floor(1.2)) = 1
  CHECK(freq_band(counts, FreqBand::top) == std::vector<std::string>{"alpha"});
  CHECK(freq_band(counts, FreqBand::bottom) == std::vector<std::string>{"zeta"});

  // fraction 0.5 -> k = 3; ties break lexicographically
  CHECK(freq_band(counts, FreqBand::top, 0.5) ==
        std::vector<std::string>{"alpha", "beta", "gamma"});
  CHECK(freq_band(counts, FreqBand::bottom, 0.5) ==
        std::vector<std::string>{"zeta", "delta", "epsilon"});

  CHECK(freq_band({}, FreqBand::top).empty());
}

TEST_CASE("frequency stratified overlap uses unweighted band overlap") {
  std::unordered_map<std::string, int64_t> a{{"x", 9}, {"y", 1}, {"z", 1}};
  std::unordered_map<std::string, int64_t> b{{"x", 7}, {"w", 1}, {"z", 2}};
  // k = 1: top bands {x} vs {x} -> 1; bottom bands {y} vs {w} -> 0
  CHECK(freq_stratified_overlap(a, b, FreqBand::top) == 1.0);
  CHECK(freq_stratified_overlap(a, b, FreqBand::bottom) == 0.0);
  CHECK(freq_stratified_overlap({}, b, FreqBand::top) == 0.0);
}
