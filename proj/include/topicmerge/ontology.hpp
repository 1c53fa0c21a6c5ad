#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "topicmerge/corpus.hpp"
#include "topicmerge/util.hpp"

namespace topicmerge {

// Directed acyclic child->parent graph over string node ids. Multiple parents
// are allowed; an edge that would close a cycle is rejected with an error
// naming the pair. Queries require finalize(), after which the structure is
// immutable and safe to share across threads.
class Ontology {
 public:
  // Registers a node (e.g. a topic with no taxonomy edges) and returns its index.
  int ensure_node(const std::string& id);
  void add_edge(const std::string& child, const std::string& parent);

  bool has_node(const std::string& id) const { return index_.count(id) > 0; }
  int index_of(const std::string& id) const {  // -1 when absent
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
  }
  const std::string& id_of(int idx) const { return ids_[static_cast<size_t>(idx)]; }
  int size() const { return static_cast<int>(ids_.size()); }
  int64_t edge_count() const { return n_edges_; }

  const std::vector<int>& parents(int idx) const { return parents_[static_cast<size_t>(idx)]; }
  const std::vector<int>& children(int idx) const { return children_[static_cast<size_t>(idx)]; }

  // Undirected projection, sorted and deduplicated.
  const std::vector<int>& neighbors(int idx) const;
  // Roots (no parents) have depth 1; otherwise 1 + min hops up to a root.
  int depth(int idx) const;

  void finalize();
  bool finalized() const { return finalized_; }

 private:
  void require_finalized() const;

  std::vector<std::string> ids_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::vector<int>> parents_, children_;
  int64_t n_edges_ = 0;
  bool finalized_ = false;
  std::vector<std::vector<int>> neighbors_;
  std::vector<int> depth_;
};

struct OntologyStats {
  int64_t nodes = 0;
  int64_t edges = 0;
  int64_t components = 0;
  int64_t largest_component = 0;
  int64_t singletons = 0;
  int64_t depth_edges = 0;  // longest root-to-node chain, counted in edges
  double avg_degree = 0.0;
  double avg_degree_largest = 0.0;
};

OntologyStats ontology_stats(const Ontology& o);

// Builds the topic ontology from parent_add events (src = child, dst =
// parent). Every corpus topic is registered as a node so isolated topics
// count as singletons.
Ontology build_ontology(const Corpus& corpus, const std::vector<Event>& events);
Ontology build_ontology(const std::vector<Event>& events);

// TSV with one "child<TAB>parent" edge per line. Blank lines are skipped;
// malformed lines and cycles raise errors with line numbers.
Ontology load_taxonomy(const std::string& path);

// Shortest undirected path length in edges; nullopt when disconnected or
// either id is absent. a == b -> 0.
std::optional<int> min_path_len(const Ontology& o, const std::string& a,
                                const std::string& b);

// Sum of 1/ln(deg(u)) over common undirected neighbors, skipping neighbors
// of degree <= 1. Absent ids -> 0.
double adamic_adar(const Ontology& o, const std::string& a, const std::string& b);

struct InformationContent {
  std::unordered_map<std::string, double> ic;
  double total_mass = 0.0;

  double of(const std::string& id) const {
    auto it = ic.find(id);
    return it == ic.end() ? 0.0 : it->second;
  }
};

// freq(c) = visible questions tagged c plus one (Laplace); mass(c) = freq(c)
// + sum of children's masses (memoized per node); p(c) = mass(c) / sum of
// root masses; IC = -ln p. A single-node ontology gets IC 0.
InformationContent information_content(const Ontology& o, const SnapshotView& v);

enum class TaxoMeasure { lin, resnik, jcn, wup };

// Similarity through the most informative (or deepest, for wup) common
// subsumer, self-ancestors included. No common subsumer or absent id -> 0.
double taxo_similarity(const Ontology& o, const InformationContent& ic,
                       const std::string& a, const std::string& b, TaxoMeasure m);

}  // namespace topicmerge
