#include "topicmerge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <unordered_set>

#include "json.hpp"
#include "topicmerge/util.hpp"

namespace topicmerge {

namespace {

constexpr int64_t kDay = 86400;
constexpr int64_t kBaseTime = 1388534400;            // 2014-01-01
constexpr int64_t kCreateWindow = 5 * 365 * kDay;
constexpr int64_t kHorizon = kBaseTime + 8 * 365 * kDay;

const char* const kConsonants = "bcdfghjklmnprstvwz";
const char* const kVowels = "aeiou";

struct Pool {
  std::vector<std::string> words;
  std::vector<double> centroid;
};

struct Builder {
  const SynthConfig& cfg;
  Rng rng;
  SynthData out;

  std::unordered_set<std::string> used_words;
  std::unordered_set<std::string> used_names;

  Pool background;
  std::vector<Pool> family_pools;
  std::vector<Pool> concept_pools;           // merge, then twins, then fillers
  std::vector<Pool> private_pools;           // one per content topic

  std::vector<int> concept_family;           // concept index -> family
  std::vector<int> filler_target;            // merge concept a lookalike shadows, -1 if none
  std::vector<std::string> category_ids;     // per family
  std::vector<std::string> global_tag_ids;
  std::vector<std::vector<std::string>> tag_ids;
  std::vector<std::vector<int>> family_topics;  // content topic indexes

  int n_merge, n_twin, n_filler, n_lookalike, n_concepts;

  explicit Builder(const SynthConfig& c) : cfg(c), rng(c.seed) {
    n_merge = cfg.merge_pairs;
    n_twin = cfg.unmerge_pairs;
    n_filler = cfg.topics - 2 * n_merge - n_twin;
    n_lookalike = n_merge > 0 ? n_filler / 2 : 0;
    n_concepts = n_merge + n_twin + n_filler;
    if (n_filler < 0)
      throw Error("synth: topics must cover 2*merge_pairs + unmerge_pairs");
    if (n_twin > 0 && n_merge == 0)
      throw Error("synth: unmerge pairs require merge pairs");
    if (cfg.families < 1) throw Error("synth: need at least one family");
  }

  std::string fresh_word() {
    for (int attempt = 0;; ++attempt) {
      int syllables = 2 + (rng.uniform() < 0.5 ? 1 : 0) + (attempt > 40 ? 1 : 0);
      std::string w;
      for (int s = 0; s < syllables; ++s) {
        w += kConsonants[static_cast<size_t>(rng.below(18))];
        w += kVowels[static_cast<size_t>(rng.below(5))];
      }
      if (rng.uniform() < 0.3) w += kConsonants[static_cast<size_t>(rng.below(18))];
      if (used_words.insert(w).second) return w;
    }
  }

  std::vector<double> random_centroid() {
    std::vector<double> v(static_cast<size_t>(cfg.dim));
    for (auto& x : v) x = rng.gaussian();
    return v;
  }

  std::vector<double> near(const std::vector<double>& centroid, double scale) {
    std::vector<double> v(centroid.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = centroid[i] + scale * rng.gaussian();
    return v;
  }

  void add_word(const std::string& w, const std::vector<double>& vec) {
    out.embeddings.emplace_back(w, vec);
  }

  Pool make_pool(int n_words, const std::vector<double>& centroid, double scale) {
    Pool p;
    p.centroid = centroid;
    for (int i = 0; i < n_words; ++i) {
      std::string w = fresh_word();
      add_word(w, near(centroid, scale));
      p.words.push_back(std::move(w));
    }
    return p;
  }

  // Zipf-ish pick: quadratic bias toward the front of the pool.
  const std::string& zipf_pick(const std::vector<std::string>& words) {
    size_t n = words.size();
    auto idx = static_cast<size_t>(rng.uniform() * rng.uniform() * static_cast<double>(n));
    return words[std::min(idx, n - 1)];
  }

  void build_vocab() {
    background = make_pool(cfg.background_words, std::vector<double>(static_cast<size_t>(cfg.dim), 0.0), 1.0);
    for (int f = 0; f < cfg.families; ++f)
      family_pools.push_back(make_pool(cfg.family_words, random_centroid(), cfg.noise_scale * 1.5));

    // Family assignment: shuffled round robin for merge concepts and fillers,
    // twins inherit the family of their partner.
    concept_family.resize(static_cast<size_t>(n_concepts));
    std::vector<int> order(static_cast<size_t>(n_merge));
    for (int i = 0; i < n_merge; ++i) order[static_cast<size_t>(i)] = i;
    rng.shuffle(order);
    for (int i = 0; i < n_merge; ++i)
      concept_family[static_cast<size_t>(order[static_cast<size_t>(i)])] = i % cfg.families;
    for (int j = 0; j < n_twin; ++j)
      concept_family[static_cast<size_t>(n_merge + j)] =
          concept_family[static_cast<size_t>(j % std::max(1, n_merge))];
    filler_target.assign(static_cast<size_t>(n_filler), -1);
    for (int k = 0; k < n_lookalike; ++k) filler_target[static_cast<size_t>(k)] = k % n_merge;
    for (int k = 0; k < n_filler; ++k) {
      int target = filler_target[static_cast<size_t>(k)];
      concept_family[static_cast<size_t>(n_merge + n_twin + k)] =
          target >= 0 ? concept_family[static_cast<size_t>(target)] : rng.below(cfg.families);
    }

    for (int c = 0; c < n_merge; ++c) {
      (void)c;
      concept_pools.push_back(make_pool(cfg.concept_words, random_centroid(), cfg.noise_scale));
    }
    for (int j = 0; j < n_twin; ++j) {
      int partner = j % std::max(1, n_merge);
      const Pool& src = concept_pools[static_cast<size_t>(partner)];
      Pool p;
      p.centroid = near(src.centroid, 0.6);
      int n_copy = std::min<int>(static_cast<int>(src.words.size()),
                                 static_cast<int>(std::floor(cfg.twin_vocab_share * cfg.concept_words)));
      std::vector<std::string> shuffled = src.words;
      rng.shuffle(shuffled);
      for (int i = 0; i < n_copy; ++i) p.words.push_back(shuffled[static_cast<size_t>(i)]);
      for (int i = n_copy; i < cfg.concept_words; ++i) {
        std::string w = fresh_word();
        add_word(w, near(p.centroid, cfg.noise_scale));
        p.words.push_back(std::move(w));
      }
      concept_pools.push_back(std::move(p));
    }
    for (int k = 0; k < n_filler; ++k) {
      int target = filler_target[static_cast<size_t>(k)];
      if (target < 0) {
        concept_pools.push_back(make_pool(cfg.concept_words, random_centroid(), cfg.noise_scale));
        continue;
      }
      // Lookalike fillers borrow a varying slice of the shadowed concept's
      // vocabulary, from faint resemblance up to near-twin levels.
      const Pool& src = concept_pools[static_cast<size_t>(target)];
      Pool p;
      p.centroid = near(src.centroid, 0.8);
      double share = cfg.impostor_vocab_share * (0.4 + 0.6 * rng.uniform());
      int n_copy = std::min<int>(static_cast<int>(src.words.size()),
                                 static_cast<int>(std::floor(share * cfg.concept_words)));
      std::vector<std::string> shuffled = src.words;
      rng.shuffle(shuffled);
      for (int i = 0; i < n_copy; ++i) p.words.push_back(shuffled[static_cast<size_t>(i)]);
      for (int i = n_copy; i < cfg.concept_words; ++i) {
        std::string w = fresh_word();
        add_word(w, near(p.centroid, cfg.noise_scale));
        p.words.push_back(std::move(w));
      }
      concept_pools.push_back(std::move(p));
    }
  }

  static std::string topic_id(int n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "t%04d", n);
    return buf;
  }

  static std::string question_id(int n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "q%06d", n);
    return buf;
  }

  std::string make_name(const Pool& pool, int n_words) {
    for (int attempt = 0; attempt < 50; ++attempt) {
      std::vector<std::string> picked;
      std::unordered_set<std::string> seen;
      for (int tries = 0; static_cast<int>(picked.size()) < n_words && tries < 60; ++tries) {
        // Uniform background picks keep accidental name collisions rare.
        const std::string& w = rng.uniform() < cfg.name_mixin_rate
                                   ? rng.pick(background.words)
                                   : zipf_pick(pool.words);
        if (seen.insert(w).second) picked.push_back(w);
      }
      if (picked.empty()) continue;
      std::string name;
      for (size_t i = 0; i < picked.size(); ++i) {
        if (i) name += '-';
        name += picked[i];
      }
      if (used_names.insert(name).second) return name;
    }
    std::string name = fresh_word();
    add_word(name, near(pool.centroid, cfg.noise_scale));
    used_names.insert(name);
    return name;
  }

  int64_t creation_time() {
    return kBaseTime + static_cast<int64_t>(rng.uniform() * static_cast<double>(kCreateWindow));
  }

  void build_structural() {
    out.topics.push_back({"root", "all-topics", kBaseTime});
    tag_ids.resize(static_cast<size_t>(cfg.families));
    for (int f = 0; f < cfg.families; ++f) {
      const Pool& pool = family_pools[static_cast<size_t>(f)];
      std::string cid = "cat" + std::to_string(f);
      category_ids.push_back(cid);
      out.topics.push_back({cid, pool.words[0] + "-category", kBaseTime});
      out.events.push_back({EventKind::parent_add, cid, "root", kBaseTime});
      for (int t = 0; t < cfg.tags_per_family; ++t) {
        std::string tid = "tag" + std::to_string(f) + "-" + std::to_string(t);
        tag_ids[static_cast<size_t>(f)].push_back(tid);
        out.topics.push_back(
            {tid, pool.words[static_cast<size_t>(1 + t) % pool.words.size()] + "-tag", kBaseTime});
        out.events.push_back({EventKind::parent_add, tid, cid, kBaseTime});
      }
    }
    for (int t = 0; t < cfg.global_tags; ++t) {
      std::string tid = "gtag" + std::to_string(t);
      global_tag_ids.push_back(tid);
      out.topics.push_back(
          {tid, background.words[static_cast<size_t>(t) % background.words.size()] + "-tag",
           kBaseTime});
      out.events.push_back({EventKind::parent_add, tid, "root", kBaseTime});
    }
  }

  struct ContentTopic {
    std::string id;
    int concept_idx;
    int family;
    int family2 = -1;            // secondary category, -1 for most topics
    int64_t created;
    double q_mean;
    double answer_rate;
    bool fades = false;          // question activity stops at active_until
    int64_t active_until = 0;
    std::vector<std::string> fav_tags;  // family tags this topic actually uses
  };
  std::vector<ContentTopic> content;

  // Each topic sticks to its own slice of the family tags; related topics
  // inherit part of that slice, unrelated ones draw a fresh one.
  std::vector<std::string> tag_prefs(int family) {
    std::vector<std::string> subset = tag_ids[static_cast<size_t>(family)];
    rng.shuffle(subset);
    size_t keep = std::min(subset.size(), static_cast<size_t>(2 + rng.below(3)));
    subset.resize(keep);
    return subset;
  }

  std::vector<std::string> tag_prefs_like(const std::vector<std::string>& src, int family,
                                          double keep_rate) {
    const auto& tags = tag_ids[static_cast<size_t>(family)];
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& t : src)
      if (rng.uniform() < keep_rate && seen.insert(t).second) out.push_back(t);
    for (int tries = 0; out.size() < src.size() && tries < 40; ++tries) {
      if (tags.empty()) break;
      const std::string& t = rng.pick(tags);
      if (seen.insert(t).second) out.push_back(t);
    }
    return out;
  }

  std::vector<std::string> winners, losers, twins, fillers;

  void add_content_topic(const std::string& id, const std::string& name, int concept_idx,
                         int64_t created, double q_mean, double answer_rate) {
    out.topics.push_back({id, name, created});
    int family = concept_family[static_cast<size_t>(concept_idx)];
    out.events.push_back(
        {EventKind::parent_add, id, category_ids[static_cast<size_t>(family)], created});
    int family2 = -1;
    if (cfg.families > 1 && rng.uniform() < cfg.second_category_rate) {
      family2 = rng.below(cfg.families - 1);
      if (family2 >= family) ++family2;
      out.events.push_back(
          {EventKind::parent_add, id, category_ids[static_cast<size_t>(family2)], created});
    }
    private_pools.push_back(
        make_pool(cfg.private_words, concept_pools[static_cast<size_t>(concept_idx)].centroid, 0.5));
    content.push_back({id, concept_idx, family, family2, created, q_mean, answer_rate, false, 0,
                       tag_prefs(family)});
    family_topics[static_cast<size_t>(family)].push_back(static_cast<int>(content.size()) - 1);
  }

  void build_topics() {
    family_topics.resize(static_cast<size_t>(cfg.families));
    int next_id = 0;
    for (int c = 0; c < n_merge; ++c) {
      const Pool& pool = concept_pools[static_cast<size_t>(c)];
      int64_t a = creation_time(), b = creation_time();
      if (a > b) std::swap(a, b);
      if (a == b) b += kDay;
      bool older_wins = rng.uniform() < cfg.older_wins_rate;
      int64_t created_w = older_wins ? a : b;
      int64_t created_l = older_wins ? b : a;
      int64_t later = std::max(created_w, created_l);

      double lag = rng.lognormal_mean(cfg.merge_lag_mean_days * kDay, cfg.merge_lag_sigma);
      auto merge_at = later + std::max<int64_t>(static_cast<int64_t>(lag), 30 * kDay);
      merge_at = std::min(merge_at, kHorizon - kDay);

      std::string wid = topic_id(next_id++), lid = topic_id(next_id++);
      int n_w = rng.uniform() < 0.6 ? 4 : 3;
      int n_l = rng.uniform() < 0.7 ? 3 : 2;
      add_content_topic(wid, make_name(pool, n_w), c, created_w, cfg.questions_mean_winner,
                        cfg.answer_rate_winner);
      add_content_topic(lid, make_name(pool, n_l), c, created_l, cfg.questions_mean_loser,
                        cfg.answer_rate_loser);
      content.back().fades = true;
      content.back().active_until = merge_at;
      content.back().fav_tags = tag_prefs_like(content[content.size() - 2].fav_tags,
                                               content.back().family, 0.7);
      winners.push_back(wid);
      losers.push_back(lid);
      out.events.push_back({EventKind::merge, lid, wid, merge_at});
      out.ground_truth.push_back({wid, lid, "merge", wid});
    }
    for (int j = 0; j < n_twin; ++j) {
      int concept_idx = n_merge + j;
      int partner = j % std::max(1, n_merge);
      const Pool& pool = concept_pools[static_cast<size_t>(concept_idx)];
      std::string tid = topic_id(next_id++);
      int n_words = rng.uniform() < 0.7 ? 3 : 2;
      add_content_topic(tid, make_name(pool, n_words), concept_idx, creation_time(),
                        cfg.questions_mean_other, cfg.answer_rate_other);
      content.back().fav_tags = tag_prefs_like(content[static_cast<size_t>(2 * partner)].fav_tags,
                                               content.back().family, 0.5);
      twins.push_back(tid);
    }
    for (int k = 0; k < n_filler; ++k) {
      int concept_idx = n_merge + n_twin + k;
      const Pool& pool = concept_pools[static_cast<size_t>(concept_idx)];
      std::string fid = topic_id(next_id++);
      int n_words = rng.uniform() < 0.7 ? 3 : 2;
      int target = filler_target[static_cast<size_t>(k)];
      if (target >= 0) {
        // Lookalikes shadow an established topic the way abandoned duplicates
        // do: created later, sparsely asked, and fading out without a merge.
        int64_t wc = content[static_cast<size_t>(2 * target)].created;
        int64_t hi = kBaseTime + kCreateWindow;
        int64_t created = wc + kDay;
        if (created < hi)
          created += static_cast<int64_t>(rng.uniform() * static_cast<double>(hi - created));
        add_content_topic(fid, make_name(pool, n_words), concept_idx, created,
                          cfg.questions_mean_loser, cfg.answer_rate_loser);
        auto span = static_cast<int64_t>(rng.lognormal_mean(400.0 * kDay, 0.6));
        content.back().fades = true;
        content.back().active_until = std::min(created + std::max(span, 30 * kDay), kHorizon - kDay);
      } else {
        add_content_topic(fid, make_name(pool, n_words), concept_idx, creation_time(),
                          cfg.questions_mean_other, cfg.answer_rate_other);
      }
      fillers.push_back(fid);
    }
  }

  // Reverted merges: twin briefly merged into its partner's winner, undone
  // before the real merge of that concept completes.
  void build_unmerges() {
    for (int j = 0; j < n_twin; ++j) {
      int partner = j % std::max(1, n_merge);
      const std::string& wid = winners[static_cast<size_t>(partner)];
      const std::string& tid = twins[static_cast<size_t>(j)];
      int64_t w_created = 0, t_created = 0;
      for (const auto& ct : content) {
        if (ct.id == wid) w_created = ct.created;
        if (ct.id == tid) t_created = ct.created;
      }
      int64_t later = std::max(w_created, t_created);
      auto m_at = later + std::max<int64_t>(
                              static_cast<int64_t>(rng.lognormal_mean(300.0 * kDay, 0.6)), 10 * kDay);
      m_at = std::min(m_at, kHorizon - 3 * kDay);
      auto u_at = m_at + std::max<int64_t>(
                             static_cast<int64_t>(rng.lognormal_mean(200.0 * kDay, 0.6)), kDay);
      u_at = std::min(u_at, kHorizon - kDay);
      out.events.push_back({EventKind::merge, tid, wid, m_at});
      out.events.push_back({EventKind::unmerge, tid, wid, u_at});
      out.ground_truth.push_back({wid, tid, "unmerge", ""});
    }
  }

  int64_t question_time(const ContentTopic& t) {
    if (t.fades) {
      int64_t span = std::max<int64_t>(t.active_until - t.created, kDay);
      if (rng.uniform() < cfg.loser_burst) {
        int64_t burst = std::min<int64_t>(span, static_cast<int64_t>(cfg.loser_burst_days) * kDay);
        return t.created + static_cast<int64_t>(rng.uniform() * static_cast<double>(burst));
      }
      double u = rng.uniform();
      return t.created + static_cast<int64_t>(u * u * static_cast<double>(span));
    }
    int64_t span = std::max<int64_t>(kHorizon - t.created, kDay);
    return t.created + static_cast<int64_t>(rng.uniform() * static_cast<double>(span));
  }

  std::string question_text(const ContentTopic& t) {
    const Pool& cpool = concept_pools[static_cast<size_t>(t.concept_idx)];
    const Pool& priv = private_pools[static_cast<size_t>(&t - content.data())];
    const Pool& family = family_pools[static_cast<size_t>(t.family)];
    int n_words = 6 + rng.poisson(8.0);
    std::string text;
    for (int i = 0; i < n_words; ++i) {
      double r = rng.uniform();
      const std::string* w;
      if (r < cfg.concept_word_rate)
        w = rng.uniform() < cfg.merge_vocab_share ? &zipf_pick(cpool.words)
                                                  : &zipf_pick(priv.words);
      else if (r < cfg.concept_word_rate + cfg.family_word_rate)
        w = &zipf_pick(family.words);
      else
        w = &zipf_pick(background.words);
      if (i) text += ' ';
      text += *w;
    }
    return text;
  }

  void build_questions() {
    int next_q = 0;
    for (const auto& t : content) {
      double mean = t.q_mean;
      auto count = static_cast<int>(std::llround(rng.lognormal_mean(mean, cfg.question_sigma)));
      count = std::clamp(count, 5, 400);
      for (int q = 0; q < count; ++q) {
        Question question;
        question.id = question_id(next_q++);
        question.created_at = question_time(t);
        question.text = question_text(t);
        question.topic_ids.push_back(t.id);
        if (rng.uniform() < cfg.category_tag_rate)
          question.topic_ids.push_back(category_ids[static_cast<size_t>(t.family)]);
        if (t.family2 >= 0) {
          if (rng.uniform() < cfg.category_tag_rate * 0.5)
            question.topic_ids.push_back(category_ids[static_cast<size_t>(t.family2)]);
          const auto& tags2 = tag_ids[static_cast<size_t>(t.family2)];
          if (!tags2.empty() && rng.uniform() < 0.25)
            question.topic_ids.push_back(zipf_pick(tags2));
        }
        const auto& tags =
            t.fav_tags.empty() ? tag_ids[static_cast<size_t>(t.family)] : t.fav_tags;
        auto n_tags = static_cast<int>(rng.below(4));
        std::unordered_set<std::string> seen;
        for (int i = 0; i < n_tags && !tags.empty(); ++i) {
          const std::string& tag = zipf_pick(tags);
          if (seen.insert(tag).second) question.topic_ids.push_back(tag);
        }
        if (cfg.families > 1 && rng.uniform() < cfg.cross_tag_rate) {
          int other = rng.below(cfg.families - 1);
          if (other >= t.family) ++other;
          const auto& otags = tag_ids[static_cast<size_t>(other)];
          if (!otags.empty()) question.topic_ids.push_back(zipf_pick(otags));
        }
        if (!global_tag_ids.empty() && rng.uniform() < cfg.global_tag_rate)
          question.topic_ids.push_back(zipf_pick(global_tag_ids));
        if (rng.uniform() >= cfg.answer_missing_rate)
          question.answer_count = rng.poisson(t.answer_rate);
        out.questions.push_back(std::move(question));
      }
    }
  }

  void build_pairs() {
    std::unordered_set<std::string> taken;
    auto key = [](const std::string& a, const std::string& b) {
      return a < b ? a + "\x1f" + b : b + "\x1f" + a;
    };
    for (const auto& g : out.ground_truth) taken.insert(key(g.t1, g.t2));

    auto family_pair = [&](std::string& a, std::string& b) {
      int f = rng.below(cfg.families);
      const auto& members = family_topics[static_cast<size_t>(f)];
      if (members.size() < 2) return false;
      int i = rng.below(static_cast<int>(members.size()));
      int j = rng.below(static_cast<int>(members.size()) - 1);
      if (j >= i) ++j;
      a = content[static_cast<size_t>(members[static_cast<size_t>(i)])].id;
      b = content[static_cast<size_t>(members[static_cast<size_t>(j)])].id;
      return true;
    };
    auto any_pair = [&](std::string& a, std::string& b) {
      int i = rng.below(static_cast<int>(content.size()));
      int j = rng.below(static_cast<int>(content.size()) - 1);
      if (j >= i) ++j;
      a = content[static_cast<size_t>(i)].id;
      b = content[static_cast<size_t>(j)].id;
      return true;
    };

    int planted = 0;
    for (int k = 0; k < n_filler && planted < cfg.generated_pairs; ++k) {
      int target = filler_target[static_cast<size_t>(k)];
      if (target < 0) continue;
      for (const auto* other : {&winners[static_cast<size_t>(target)],
                                &losers[static_cast<size_t>(target)]}) {
        if (planted >= cfg.generated_pairs) break;
        if (!taken.insert(key(fillers[static_cast<size_t>(k)], *other)).second) continue;
        out.ground_truth.push_back({fillers[static_cast<size_t>(k)], *other, "generated", ""});
        ++planted;
      }
    }

    int made = 0;
    for (int attempt = 0; made < cfg.neighbor_pairs && attempt < 200 * cfg.neighbor_pairs;
         ++attempt) {
      std::string a, b;
      if (!family_pair(a, b)) continue;
      if (!taken.insert(key(a, b)).second) continue;
      out.ground_truth.push_back({a, b, "neighbor", ""});
      ++made;
    }
    if (made < cfg.neighbor_pairs)
      throw Error("synth: could not place the requested neighbor pairs");

    made = planted;
    for (int attempt = 0; made < cfg.generated_pairs && attempt < 200 * cfg.generated_pairs;
         ++attempt) {
      std::string a, b;
      bool ok = rng.uniform() < cfg.cousin_fraction ? family_pair(a, b) : any_pair(a, b);
      if (!ok) continue;
      if (!taken.insert(key(a, b)).second) continue;
      out.ground_truth.push_back({a, b, "generated", ""});
      ++made;
    }
    if (made < cfg.generated_pairs)
      throw Error("synth: could not place the requested generated pairs");
  }

  void build_taxonomy() {
    for (int f = 0; f < cfg.families; ++f)
      out.taxonomy.emplace_back("family-" + std::to_string(f), "root");
    out.taxonomy.emplace_back("pool-background", "root");
    for (int c = 0; c < n_concepts; ++c)
      out.taxonomy.emplace_back(
          "pool-" + std::to_string(c),
          "family-" + std::to_string(concept_family[static_cast<size_t>(c)]));
    for (const auto& w : background.words) out.taxonomy.emplace_back(w, "pool-background");
    for (int f = 0; f < cfg.families; ++f)
      for (const auto& w : family_pools[static_cast<size_t>(f)].words)
        out.taxonomy.emplace_back(w, "family-" + std::to_string(f));
    std::unordered_set<std::string> seen_edges;
    std::vector<std::pair<std::string, std::string>> word_edges;
    for (int c = 0; c < n_concepts; ++c)
      for (const auto& w : concept_pools[static_cast<size_t>(c)].words)
        word_edges.emplace_back(w, "pool-" + std::to_string(c));
    for (size_t i = 0; i < private_pools.size(); ++i)
      for (const auto& w : private_pools[i].words)
        word_edges.emplace_back(w, "pool-" + std::to_string(content[i].concept_idx));
    for (auto& e : word_edges) {
      if (!seen_edges.insert(e.first + "\t" + e.second).second) continue;
      out.taxonomy.push_back(std::move(e));
    }
  }

  SynthData build() {
    build_vocab();
    build_structural();
    build_topics();
    build_unmerges();
    build_questions();
    build_pairs();
    build_taxonomy();
    return std::move(out);
  }
};

}  // namespace

SynthData generate_synth(const SynthConfig& cfg) { return Builder(cfg).build(); }

void write_synth(const SynthData& data, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  using nlohmann::json;

  std::string buf;
  for (const auto& t : data.topics) {
    json j{{"id", t.id}, {"name", t.name}, {"created_at", format_iso8601(t.created_at)}};
    buf += j.dump() + "\n";
  }
  write_file(dir + "/topics.jsonl", buf);

  buf.clear();
  for (const auto& q : data.questions) {
    json j{{"id", q.id},
           {"text", q.text},
           {"created_at", format_iso8601(q.created_at)},
           {"topic_ids", q.topic_ids}};
    if (q.answer_count) j["answer_count"] = *q.answer_count;
    buf += j.dump() + "\n";
  }
  write_file(dir + "/questions.jsonl", buf);

  buf.clear();
  for (const auto& e : data.events) {
    json j{{"kind", event_kind_name(e.kind)},
           {"src", e.src},
           {"dst", e.dst},
           {"at", format_iso8601(e.at)}};
    buf += j.dump() + "\n";
  }
  write_file(dir + "/events.jsonl", buf);

  save_ground_truth(data.ground_truth, dir + "/ground_truth.jsonl");

  buf.clear();
  if (!data.embeddings.empty()) {
    buf += std::to_string(data.embeddings.size()) + " " +
           std::to_string(data.embeddings.front().second.size()) + "\n";
    for (const auto& [word, vec] : data.embeddings) {
      buf += word;
      for (double x : vec) {
        buf += ' ';
        buf += fmt_double_short(x);
      }
      buf += '\n';
    }
  }
  write_file(dir + "/embeddings.vec", buf);

  buf.clear();
  for (const auto& [child, parent] : data.taxonomy) buf += child + "\t" + parent + "\n";
  write_file(dir + "/taxonomy.tsv", buf);
}

}  // namespace topicmerge
