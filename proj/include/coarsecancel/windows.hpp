#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coarsecancel/action.hpp"
#include "coarsecancel/amalgam.hpp"
#include "coarsecancel/metric_space.hpp"

namespace ccl {

namespace detail {

// Canonical key of the coset g·F (F = factor 0 or 1): normalize, strip the
// trailing F-syllable, then minimize over the right C-action (g and g·c
// name the same coset and their stripped forms exhaust it).
inline std::string coset_key(const AmalgamData& d, const AmalgamNormalForm& g, int f) {
  auto strip = [&](AmalgamNormalForm nf) {
    if (!nf.syllables.empty() && nf.syllables.back().first == f) nf.syllables.pop_back();
    if (nf.syllables.empty()) nf.c = d.C().identity();  // the root coset absorbs C
    return nf;
  };
  AmalgamNormalForm best = strip(g);
  for (int c = 0; c < d.C().size(); ++c) {
    AmalgamNormalForm cc;
    cc.c = c;
    AmalgamNormalForm cand = strip(amal::mul(d, g, cc));
    if (cand < best) best = cand;
  }
  return (f == 0 ? "A|" : "B|") + best.str(d);
}

}  // namespace detail

struct BassSerreWindow {
  FiniteMetricSpace space;
  std::shared_ptr<ActionWindow> window;
  std::vector<std::string> generator_names;
};

// Ball of the Bass-Serre tree of A *_C B around the coset A, with the
// designated factor generators acting as partial isometries. Unit edges;
// the space is a tree, so delta = 0 and translation lengths are exact.
inline BassSerreWindow bass_serre_window(const std::shared_ptr<const AmalgamData>& data,
                                         int radius, int max_word_length = 4) {
  if (radius < 1) throw error("bass_serre_window: radius must be >= 1");
  const AmalgamData& d = *data;

  struct Vertex {
    AmalgamNormalForm rep;  // group element whose coset this is
    int type;               // 0 = A-coset, 1 = B-coset
    int level;
  };
  std::vector<Vertex> verts;
  std::map<std::string, int> by_key;
  std::vector<std::pair<int, int>> edges;

  AmalgamNormalForm e = amal::identity_nf(d);
  verts.push_back({e, 0, 0});
  by_key[detail::coset_key(d, e, 0)] = 0;

  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int vi : frontier) {
      Vertex v = verts[static_cast<std::size_t>(vi)];
      if (v.level >= radius) continue;
      int f = v.type;
      int other = 1 - f;
      for (int t : d.left_transversal(f)) {
        AmalgamNormalForm g = v.rep;
        if (t != d.factor(f).identity()) {
          auto [c, rep] = d.decompose(f, t);
          AmalgamNormalForm tnf;
          tnf.c = c;
          if (rep != d.factor(f).identity()) tnf.syllables.push_back({f, rep});
          g = amal::mul(d, v.rep, tnf);
        }
        std::string key = detail::coset_key(d, g, other);
        auto it = by_key.find(key);
        int ui;
        if (it == by_key.end()) {
          ui = static_cast<int>(verts.size());
          verts.push_back({g, other, v.level + 1});
          by_key[key] = ui;
          next.push_back(ui);
        } else {
          ui = it->second;
        }
        if (ui != vi) {
          auto edge = std::minmax(vi, ui);
          if (std::find(edges.begin(), edges.end(), std::make_pair(edge.first, edge.second)) ==
              edges.end())
            edges.push_back({edge.first, edge.second});
        }
      }
    }
    frontier = std::move(next);
  }

  GraphSpec spec;
  std::vector<std::string> keys(verts.size());
  for (auto& [k, i] : by_key) keys[static_cast<std::size_t>(i)] = k;
  for (auto& k : keys) spec.vertices.push_back(k);
  for (auto& [u, v] : edges) spec.edges.push_back({keys[static_cast<std::size_t>(u)], keys[static_cast<std::size_t>(v)], 1.0});
  FiniteMetricSpace X = build_space(spec);

  // generators: designated factor generators when provided, else every
  // non-identity factor element
  struct GenSpec {
    std::string name;
    int factor;
    int elem;
  };
  std::vector<GenSpec> gen_specs;
  for (int f = 0; f < 2; ++f) {
    auto des = d.designated_gen(f);
    const GroupTable& fac = d.factor(f);
    if (des) {
      gen_specs.push_back({f == 0 ? "a" : "b", f, *des});
    } else {
      for (int x = 0; x < fac.size(); ++x)
        if (x != fac.identity())
          gen_specs.push_back({(f == 0 ? "A:" : "B:") + fac.id_of(x), f, x});
    }
  }

  std::vector<PartialIsometry> gens;
  for (auto& gs : gen_specs) {
    auto [c, rep] = d.decompose(gs.factor, gs.elem);
    AmalgamNormalForm gnf;
    gnf.c = c;
    if (rep != d.factor(gs.factor).identity()) gnf.syllables.push_back({gs.factor, rep});
    PartialIsometry pi;
    pi.name = gs.name;
    pi.map.assign(verts.size(), -1);
    for (std::size_t vi = 0; vi < verts.size(); ++vi) {
      AmalgamNormalForm img = amal::mul(d, gnf, verts[vi].rep);
      std::string key = detail::coset_key(d, img, verts[vi].type);
      auto it = by_key.find(key);
      if (it != by_key.end()) pi.map[vi] = X.index(keys[static_cast<std::size_t>(it->second)]);
    }
    // remap domain indexing: vertex order in X follows spec.vertices = keys order
    gens.push_back(std::move(pi));
  }

  // vertex vi in verts corresponds to X.index(keys[vi]); rebuild maps in X's order
  std::vector<int> to_x(verts.size());
  for (std::size_t vi = 0; vi < verts.size(); ++vi) to_x[vi] = X.index(keys[vi]);
  for (auto& g : gens) {
    std::vector<int> remapped(verts.size(), -1);
    for (std::size_t vi = 0; vi < verts.size(); ++vi)
      if (g.map[vi] >= 0) remapped[static_cast<std::size_t>(to_x[vi])] = g.map[vi];
    g.map = std::move(remapped);
  }

  BassSerreWindow out;
  out.space = X;
  auto win = std::make_shared<ActionWindow>(X, gens, max_word_length, /*tree_window=*/true);
  // exact element identity through normal forms
  std::vector<std::pair<int, int>> letter_of;  // generator -> (factor, elem)
  for (auto& gs : gen_specs) letter_of.push_back({gs.factor, gs.elem});
  win->set_element_key([data, letter_of](const Word& w) {
    const AmalgamData& dd = *data;
    std::vector<FactorLetter> letters;
    for (auto& l : w) {
      auto [f, x] = letter_of[static_cast<std::size_t>(l.gen)];
      letters.push_back({f, l.exp > 0 ? x : dd.factor(f).inverse(x)});
    }
    return amal::normal_form(dd, letters).str(dd);
  });
  out.window = win;
  for (auto& gs : gen_specs) out.generator_names.push_back(gs.name);
  return out;
}

// Ball of the Cayley tree of a free group of the given rank, generators
// acting partially by left multiplication. Unit edges.
inline std::shared_ptr<ActionWindow> free_group_cayley_window(int rank, int radius,
                                                              int max_word_length = 3) {
  if (rank < 1 || rank > 26) throw error("free_group_cayley_window: rank out of range");
  struct Node {
    std::string word;  // reduced, letters a..z / A..Z
  };
  std::vector<std::string> words{""};
  std::vector<std::pair<int, int>> edges;
  std::map<std::string, int> idx{{"", 0}};
  std::vector<int> frontier{0};
  auto flip = [](char c) -> char {
    return std::isupper(static_cast<unsigned char>(c))
               ? static_cast<char>(std::tolower(static_cast<unsigned char>(c)))
               : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  };
  for (int level = 0; level < radius; ++level) {
    std::vector<int> next;
    for (int vi : frontier) {
      std::string w = words[static_cast<std::size_t>(vi)];
      for (int g = 0; g < rank; ++g)
        for (int e = 0; e < 2; ++e) {
          char c = e == 0 ? static_cast<char>('a' + g) : static_cast<char>('A' + g);
          if (!w.empty() && w.back() == flip(c)) continue;
          std::string w2 = w + c;
          int ui = static_cast<int>(words.size());
          words.push_back(w2);
          idx[w2] = ui;
          edges.push_back({vi, ui});
          next.push_back(ui);
        }
    }
    frontier = std::move(next);
  }
  GraphSpec spec;
  for (auto& w : words) spec.vertices.push_back(w.empty() ? "1" : w);
  for (auto& [u, v] : edges)
    spec.edges.push_back({spec.vertices[static_cast<std::size_t>(u)], spec.vertices[static_cast<std::size_t>(v)], 1.0});
  FiniteMetricSpace X = build_space(spec);

  // left multiplication: g * w, reduced
  auto reduce_left = [&](char c, const std::string& w) {
    if (!w.empty() && w.front() == flip(c)) return w.substr(1);
    return std::string(1, c) + w;
  };
  std::vector<PartialIsometry> gens;
  for (int g = 0; g < rank; ++g) {
    char c = static_cast<char>('a' + g);
    PartialIsometry pi;
    pi.name = std::string(1, c);
    pi.map.assign(words.size(), -1);
    for (std::size_t vi = 0; vi < words.size(); ++vi) {
      std::string img = reduce_left(c, words[vi]);
      auto it = idx.find(img);
      if (it != idx.end())
        pi.map[static_cast<std::size_t>(X.index(words[vi].empty() ? "1" : words[vi]))] =
            X.index(img.empty() ? "1" : img);
    }
    gens.push_back(std::move(pi));
  }
  return std::make_shared<ActionWindow>(X, gens, max_word_length, /*tree_window=*/true);
}

}  // namespace ccl
