#include "topicmerge/embed.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace topicmerge {

namespace {

bool parse_floats(const std::string& line, size_t start, std::vector<float>& out) {
  out.clear();
  const char* p = line.data() + start;
  const char* end = line.data() + line.size();
  while (p < end) {
    while (p < end && *p == ' ') ++p;
    if (p >= end) break;
    float v;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) return false;
    out.push_back(v);
    p = next;
  }
  return true;
}

}  // namespace

VectorTable load_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vector file: " + path);
  VectorTable table;
  std::string line;
  size_t lineno = 0;
  std::vector<float> vals;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t sp = line.find(' ');
    if (sp == std::string::npos || sp == 0)
      throw Error(path + " line " + std::to_string(lineno) + ": expected word and values");
    std::string word = line.substr(0, sp);
    if (!parse_floats(line, sp + 1, vals) || vals.empty())
      throw Error(path + " line " + std::to_string(lineno) + ": bad vector values");

    if (lineno == 1 && vals.size() == 1) {
      // "count dim" header: the first token must itself be an integer.
      int64_t count;
      auto [next, ec] = std::from_chars(word.data(), word.data() + word.size(), count);
      if (ec == std::errc() && next == word.data() + word.size()) continue;
    }
    if (table.dim == 0) table.dim = vals.size();
    if (vals.size() != table.dim)
      throw Error(path + " line " + std::to_string(lineno) + ": dimension mismatch (" +
                  std::to_string(vals.size()) + " vs " + std::to_string(table.dim) + ")");
    table.vectors.emplace(std::move(word), vals);
  }
  return table;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<double> doc_vector(const std::unordered_map<std::string, int64_t>& term_counts,
                               const VectorTable& table, DocVecWeighting mode,
                               int64_t min_count,
                               const std::unordered_map<std::string, int64_t>& global_freq,
                               const TfidfIndex* idx) {
  if (mode == DocVecWeighting::tfidf && !idx)
    throw Error("doc_vector: tfidf weighting requires an index");
  std::vector<double> acc(table.dim, 0.0);
  double weight_sum = 0.0;
  for (const auto& [word, count] : term_counts) {
    auto git = global_freq.find(word);
    if (git == global_freq.end() || git->second < min_count) continue;
    const auto* vec = table.find(word);
    if (!vec) continue;
    double w = mode == DocVecWeighting::uniform
                   ? static_cast<double>(count)
                   : static_cast<double>(count) * idx->idf(word);
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += w * static_cast<double>((*vec)[i]);
    weight_sum += w;
  }
  if (weight_sum > 0.0)
    for (double& v : acc) v /= weight_sum;
  return acc;
}

}  // namespace topicmerge
