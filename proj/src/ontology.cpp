#include "topicmerge/ontology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <unordered_set>

namespace topicmerge {

int Ontology::ensure_node(const std::string& id) {
  auto it = index_.find(id);
  if (it != index_.end()) return it->second;
  if (finalized_) throw Error("ontology is finalized; cannot add node " + id);
  int idx = static_cast<int>(ids_.size());
  ids_.push_back(id);
  index_.emplace(id, idx);
  parents_.emplace_back();
  children_.emplace_back();
  return idx;
}

void Ontology::add_edge(const std::string& child, const std::string& parent) {
  if (finalized_) throw Error("ontology is finalized; cannot add edges");
  if (child == parent)
    throw Error("ontology cycle: " + child + " cannot be its own parent");
  int c = ensure_node(child);
  int p = ensure_node(parent);
  for (int existing : parents_[static_cast<size_t>(c)])
    if (existing == p) return;  // duplicate edges are idempotent

  // Adding c -> p closes a cycle iff c is already an ancestor of p.
  std::vector<int> stack{p};
  std::unordered_set<int> seen{p};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    if (cur == c)
      throw Error("ontology cycle: adding parent edge " + child + " -> " + parent);
    for (int up : parents_[static_cast<size_t>(cur)])
      if (seen.insert(up).second) stack.push_back(up);
  }

  parents_[static_cast<size_t>(c)].push_back(p);
  children_[static_cast<size_t>(p)].push_back(c);
  ++n_edges_;
}

void Ontology::finalize() {
  if (finalized_) return;
  size_t n = ids_.size();
  neighbors_.assign(n, {});
  for (size_t i = 0; i < n; ++i) {
    auto& nb = neighbors_[i];
    nb.insert(nb.end(), parents_[i].begin(), parents_[i].end());
    nb.insert(nb.end(), children_[i].begin(), children_[i].end());
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
  depth_.assign(n, 0);
  std::deque<int> queue;
  for (size_t i = 0; i < n; ++i)
    if (parents_[i].empty()) {
      depth_[i] = 1;
      queue.push_back(static_cast<int>(i));
    }
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (int ch : children_[static_cast<size_t>(cur)]) {
      if (depth_[static_cast<size_t>(ch)] == 0) {
        depth_[static_cast<size_t>(ch)] = depth_[static_cast<size_t>(cur)] + 1;
        queue.push_back(ch);
      }
    }
  }
  finalized_ = true;
}

void Ontology::require_finalized() const {
  if (!finalized_) throw Error("ontology not finalized");
}

const std::vector<int>& Ontology::neighbors(int idx) const {
  require_finalized();
  return neighbors_[static_cast<size_t>(idx)];
}

int Ontology::depth(int idx) const {
  require_finalized();
  return depth_[static_cast<size_t>(idx)];
}

OntologyStats ontology_stats(const Ontology& o) {
  OntologyStats s;
  s.nodes = o.size();
  s.edges = o.edge_count();
  if (o.size() == 0) return s;
  std::vector<int> comp(static_cast<size_t>(o.size()), -1);
  std::vector<int64_t> comp_size;
  for (int i = 0; i < o.size(); ++i) {
    if (comp[static_cast<size_t>(i)] != -1) continue;
    int c = static_cast<int>(comp_size.size());
    comp_size.push_back(0);
    std::vector<int> stack{i};
    comp[static_cast<size_t>(i)] = c;
    while (!stack.empty()) {
      int cur = stack.back();
      stack.pop_back();
      ++comp_size.back();
      for (int nb : o.neighbors(cur))
        if (comp[static_cast<size_t>(nb)] == -1) {
          comp[static_cast<size_t>(nb)] = c;
          stack.push_back(nb);
        }
    }
  }
  s.components = static_cast<int64_t>(comp_size.size());
  int largest = 0;
  for (size_t c = 0; c < comp_size.size(); ++c) {
    if (comp_size[c] > comp_size[static_cast<size_t>(largest)]) largest = static_cast<int>(c);
    if (comp_size[c] == 1) ++s.singletons;
  }
  s.largest_component = comp_size[static_cast<size_t>(largest)];

  int max_depth = 0;
  for (int i = 0; i < o.size(); ++i) max_depth = std::max(max_depth, o.depth(i));
  s.depth_edges = max_depth > 0 ? max_depth - 1 : 0;

  double deg_sum = 0.0, deg_sum_largest = 0.0;
  int64_t n_largest = 0;
  for (int i = 0; i < o.size(); ++i) {
    double d = static_cast<double>(o.neighbors(i).size());
    deg_sum += d;
    if (comp[static_cast<size_t>(i)] == largest) {
      deg_sum_largest += d;
      ++n_largest;
    }
  }
  s.avg_degree = deg_sum / static_cast<double>(o.size());
  s.avg_degree_largest =
      n_largest > 0 ? deg_sum_largest / static_cast<double>(n_largest) : 0.0;
  return s;
}

Ontology build_ontology(const Corpus& corpus, const std::vector<Event>& events) {
  Ontology o;
  for (const auto& t : corpus.topics()) o.ensure_node(t.id);
  for (const auto& e : events)
    if (e.kind == EventKind::parent_add) o.add_edge(e.src, e.dst);
  o.finalize();
  return o;
}

Ontology build_ontology(const std::vector<Event>& events) {
  Ontology o;
  for (const auto& e : events)
    if (e.kind == EventKind::parent_add) o.add_edge(e.src, e.dst);
  o.finalize();
  return o;
}

Ontology load_taxonomy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open taxonomy file: " + path);
  Ontology o;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size() ||
        line.find('\t', tab + 1) != std::string::npos)
      throw Error(path + " line " + std::to_string(lineno) +
                  ": expected \"child<TAB>parent\"");
    try {
      o.add_edge(line.substr(0, tab), line.substr(tab + 1));
    } catch (const Error& e) {
      throw Error(path + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  o.finalize();
  return o;
}

std::optional<int> min_path_len(const Ontology& o, const std::string& a,
                                const std::string& b) {
  int ia = o.index_of(a), ib = o.index_of(b);
  if (ia < 0 || ib < 0) return std::nullopt;
  if (ia == ib) return 0;
  std::vector<int> dist(static_cast<size_t>(o.size()), -1);
  std::deque<int> queue{ia};
  dist[static_cast<size_t>(ia)] = 0;
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    for (int nb : o.neighbors(cur)) {
      if (dist[static_cast<size_t>(nb)] != -1) continue;
      dist[static_cast<size_t>(nb)] = dist[static_cast<size_t>(cur)] + 1;
      if (nb == ib) return dist[static_cast<size_t>(nb)];
      queue.push_back(nb);
    }
  }
  return std::nullopt;
}

double adamic_adar(const Ontology& o, const std::string& a, const std::string& b) {
  int ia = o.index_of(a), ib = o.index_of(b);
  if (ia < 0 || ib < 0) return 0.0;
  const auto& na = o.neighbors(ia);
  const auto& nb = o.neighbors(ib);
  double sum = 0.0;
  size_t i = 0, j = 0;
  while (i < na.size() && j < nb.size()) {
    if (na[i] < nb[j]) ++i;
    else if (na[i] > nb[j]) ++j;
    else {
      size_t deg = o.neighbors(na[i]).size();
      if (deg > 1) sum += 1.0 / std::log(static_cast<double>(deg));
      ++i;
      ++j;
    }
  }
  return sum;
}

InformationContent information_content(const Ontology& o, const SnapshotView& v) {
  size_t n = static_cast<size_t>(o.size());
  InformationContent out;
  if (n == 0) return out;
  std::vector<double> freq(n), mass(n, -1.0);
  for (size_t i = 0; i < n; ++i)
    freq[i] = static_cast<double>(v.question_count_or_zero(o.id_of(static_cast<int>(i)))) + 1.0;

  // Memoized mass(c) = freq(c) + sum over children of mass(child); iterative
  // post-order so deep chains cannot overflow the stack.
  for (size_t start = 0; start < n; ++start) {
    if (mass[start] >= 0.0) continue;
    std::vector<std::pair<int, size_t>> stack{{static_cast<int>(start), 0}};
    while (!stack.empty()) {
      auto& [node, next_child] = stack.back();
      const auto& ch = o.children(node);
      size_t k = next_child;
      bool descended = false;
      while (k < ch.size()) {
        if (mass[static_cast<size_t>(ch[k])] < 0.0) {
          stack.back().second = k + 1;
          stack.emplace_back(ch[k], 0);
          descended = true;
          break;
        }
        ++k;
      }
      if (descended) continue;
      double m = freq[static_cast<size_t>(node)];
      for (int c : ch) m += mass[static_cast<size_t>(c)];
      mass[static_cast<size_t>(node)] = m;
      stack.pop_back();
    }
  }

  double z = 0.0;
  for (size_t i = 0; i < n; ++i)
    if (o.parents(static_cast<int>(i)).empty()) z += mass[i];
  out.total_mass = z;
  for (size_t i = 0; i < n; ++i) {
    double p = mass[i] / z;
    double ic = p >= 1.0 ? 0.0 : -std::log(p);
    out.ic.emplace(o.id_of(static_cast<int>(i)), ic);
  }
  return out;
}

namespace {

std::unordered_set<int> ancestors_with_self(const Ontology& o, int start) {
  std::unordered_set<int> seen{start};
  std::vector<int> stack{start};
  while (!stack.empty()) {
    int cur = stack.back();
    stack.pop_back();
    for (int p : o.parents(cur))
      if (seen.insert(p).second) stack.push_back(p);
  }
  return seen;
}

}  // namespace

double taxo_similarity(const Ontology& o, const InformationContent& ic,
                       const std::string& a, const std::string& b, TaxoMeasure m) {
  int ia = o.index_of(a), ib = o.index_of(b);
  if (ia < 0 || ib < 0) return 0.0;
  auto anc_a = ancestors_with_self(o, ia);
  auto anc_b = ancestors_with_self(o, ib);
  const auto& small = anc_a.size() <= anc_b.size() ? anc_a : anc_b;
  const auto& large = anc_a.size() <= anc_b.size() ? anc_b : anc_a;

  int best = -1;
  double best_key = -1.0;
  for (int c : small) {
    if (!large.count(c)) continue;
    double key = m == TaxoMeasure::wup ? static_cast<double>(o.depth(c))
                                       : ic.of(o.id_of(c));
    if (best == -1 || key > best_key || (key == best_key && c < best)) {
      best = c;
      best_key = key;
    }
  }
  if (best == -1) return 0.0;

  if (m == TaxoMeasure::wup) {
    double d = static_cast<double>(o.depth(ia) + o.depth(ib));
    if (d <= 0.0) return 0.0;
    return 2.0 * static_cast<double>(o.depth(best)) / d;
  }
  double ic_lcs = ic.of(o.id_of(best));
  double ic_a = ic.of(a), ic_b = ic.of(b);
  switch (m) {
    case TaxoMeasure::resnik:
      return ic_lcs;
    case TaxoMeasure::lin: {
      double denom = ic_a + ic_b;
      if (denom <= 0.0) return 0.0;
      return 2.0 * ic_lcs / denom;
    }
    case TaxoMeasure::jcn: {
      double dist = ic_a + ic_b - 2.0 * ic_lcs;
      return 1.0 / std::max(1e-4, dist);
    }
    default:
      return 0.0;
  }
}

}  // namespace topicmerge
