#include "mutgen/treediff.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <functional>
#include <map>
#include <queue>
#include <unordered_map>
#include <utility>

namespace mutgen {

using java::AstNode;
using java::NodeLabel;

namespace {

struct Arena {
  struct Node {
    NodeLabel label = NodeLabel::Other;
    bool is_virtual = false;
    std::string text;
    int parent = -1;
    std::vector<int> kids;
    int size = 1;        // subtree size, self included
    int height = 1;      // leaf = 1
    std::uint64_t hash = 0;
  };

  std::vector<Node> nodes;

  int add(NodeLabel label, std::string text, int parent) {
    const int id = static_cast<int>(nodes.size());
    Node n;
    n.label = label;
    n.text = std::move(text);
    n.parent = parent;
    nodes.push_back(std::move(n));
    if (parent >= 0) nodes[parent].kids.push_back(id);
    return id;
  }

  int build(const AstNode& ast, int parent) {
    const int id = add(ast.label, ast.text, parent);
    for (const AstNode& child : ast.children) build(child, id);
    return id;
  }

  void finish(int id) {
    Node& n = nodes[id];
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint64_t>(n.label));
    mix(n.is_virtual ? 7u : 3u);
    for (char c : n.text) mix(static_cast<unsigned char>(c));
    n.size = 1;
    n.height = 1;
    for (int k : n.kids) {
      finish(k);
      mix(nodes[k].hash);
      n.size += nodes[k].size;
      n.height = std::max(n.height, nodes[k].height + 1);
    }
    n.hash = h;
  }
};

Arena make_arena(const AstNode& root) {
  Arena a;
  const int v = a.add(NodeLabel::Other, "", -1);
  a.nodes[v].is_virtual = true;
  a.build(root, v);
  a.finish(0);
  return a;
}

bool equal_subtree(const Arena& s, int si, const Arena& t, int ti) {
  const auto& a = s.nodes[si];
  const auto& b = t.nodes[ti];
  if (a.label != b.label || a.is_virtual != b.is_virtual || a.text != b.text) return false;
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!equal_subtree(s, a.kids[i], t, b.kids[i])) return false;
  return true;
}

// longest common subsequence of two index vectors under `eq`
std::vector<std::pair<int, int>> lcs_pairs(const std::vector<int>& a, const std::vector<int>& b,
                                           const std::function<bool(int, int)>& eq) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t j = m; j-- > 0;)
      dp[i][j] = eq(a[i], b[j]) ? dp[i + 1][j + 1] + 1 : std::max(dp[i + 1][j], dp[i][j + 1]);
  std::vector<std::pair<int, int>> out;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (eq(a[i], b[j])) {
      out.emplace_back(a[i], b[j]);
      ++i;
      ++j;
    } else if (dp[i + 1][j] >= dp[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

class Differ {
 public:
  Differ(const AstNode& source, const AstNode& target)
      : src_(make_arena(source)), tgt_(make_arena(target)) {
    src2tgt_.assign(src_.nodes.size(), -1);
    tgt2src_.assign(tgt_.nodes.size(), -1);
    match(0, 0);  // virtual containers
  }

  EditScript run() {
    match_identical_subtrees();
    match_containers();
    recover_alignment();
    return derive_script();
  }

 private:
  bool matched_s(int s) const { return src2tgt_[s] >= 0; }
  bool matched_t(int t) const { return tgt2src_[t] >= 0; }

  void match(int s, int t) {
    src2tgt_[s] = t;
    tgt2src_[t] = s;
  }

  void match_subtrees(int s, int t) {
    match(s, t);
    const auto& sk = src_.nodes[s].kids;
    const auto& tk = tgt_.nodes[t].kids;
    for (std::size_t i = 0; i < sk.size(); ++i) match_subtrees(sk[i], tk[i]);
  }

  // phase 1: identical subtrees of height >= 2, tallest first
  void match_identical_subtrees() {
    std::vector<int> order;
    for (int s = 1; s < static_cast<int>(src_.nodes.size()); ++s) order.push_back(s);
    std::sort(order.begin(), order.end(), [this](int a, int b) {
      if (src_.nodes[a].height != src_.nodes[b].height)
        return src_.nodes[a].height > src_.nodes[b].height;
      return a < b;
    });
    for (int s : order) {
      if (matched_s(s) || src_.nodes[s].height < 2) continue;
      for (int t = 1; t < static_cast<int>(tgt_.nodes.size()); ++t) {
        if (matched_t(t) || tgt_.nodes[t].hash != src_.nodes[s].hash) continue;
        if (!equal_subtree(src_, s, tgt_, t)) continue;
        match_subtrees(s, t);
        break;
      }
    }
  }

  // phase 2: containers with matched descendants, postorder, dice >= 0.5
  void match_containers() {
    std::vector<int> postorder;
    postorder.reserve(src_.nodes.size());
    collect_postorder(0, postorder);
    for (int s : postorder) {
      if (s == 0 || matched_s(s) || src_.nodes[s].size < 2) continue;
      // candidate targets: unmatched same-label ancestors of partners of
      // matched descendants
      std::vector<int> cands;
      const int s_end = s + src_.nodes[s].size;
      for (int d = s + 1; d < s_end; ++d) {
        if (!matched_s(d)) continue;
        for (int t = tgt_.nodes[src2tgt_[d]].parent; t > 0; t = tgt_.nodes[t].parent) {
          if (!matched_t(t) && tgt_.nodes[t].label == src_.nodes[s].label &&
              std::find(cands.begin(), cands.end(), t) == cands.end())
            cands.push_back(t);
        }
      }
      int best = -1;
      double best_dice = 0.0;
      for (int t : cands) {
        const double d = dice(s, t);
        if (d > best_dice || (d == best_dice && best >= 0 && t < best)) {
          best_dice = d;
          best = t;
        }
      }
      if (best >= 0 && best_dice >= 0.5) match(s, best);
    }
  }

  void collect_postorder(int id, std::vector<int>& out) const {
    for (int k : src_.nodes[id].kids) collect_postorder(k, out);
    out.push_back(id);
  }

  double dice(int s, int t) const {
    const int s_end = s + src_.nodes[s].size;
    const int t_end = t + tgt_.nodes[t].size;
    int common = 0;
    for (int d = s + 1; d < s_end; ++d) {
      const int p = src2tgt_[d];
      if (p > t && p < t_end) ++common;
    }
    const int denom = (src_.nodes[s].size - 1) + (tgt_.nodes[t].size - 1);
    return denom == 0 ? 0.0 : 2.0 * common / denom;
  }

  // phase 3: align unmatched children of matched pairs, first by (label,
  // text), then by label alone; recurse into every new pair
  void recover_alignment() {
    std::vector<std::pair<int, int>> work;
    for (int s = 0; s < static_cast<int>(src_.nodes.size()); ++s)
      if (matched_s(s)) work.emplace_back(s, src2tgt_[s]);
    for (const auto& [s, t] : work) recover_pair(s, t);
  }

  void recover_pair(int s, int t) {
    std::vector<int> su, tu;
    for (int k : src_.nodes[s].kids)
      if (!matched_s(k)) su.push_back(k);
    for (int k : tgt_.nodes[t].kids)
      if (!matched_t(k)) tu.push_back(k);
    if (su.empty() || tu.empty()) return;

    auto pass = [&](bool with_text) {
      auto eq = [&](int a, int b) {
        if (matched_s(a) || matched_t(b)) return false;
        if (src_.nodes[a].label != tgt_.nodes[b].label) return false;
        return !with_text || src_.nodes[a].text == tgt_.nodes[b].text;
      };
      for (const auto& [a, b] : lcs_pairs(su, tu, eq)) {
        if (matched_s(a) || matched_t(b)) continue;
        match(a, b);
        recover_pair(a, b);
      }
    };
    pass(true);
    pass(false);
  }

  // ---- script derivation (working copy + breadth-first walk of target) ----

  struct Working {
    std::vector<Arena::Node> nodes;  // shares ids with src_; grows on INS

    int index_of(int id) const {
      const auto& sib = nodes[nodes[id].parent].kids;
      return static_cast<int>(std::find(sib.begin(), sib.end(), id) - sib.begin());
    }
    void detach(int id) {
      auto& sib = nodes[nodes[id].parent].kids;
      sib.erase(std::find(sib.begin(), sib.end(), id));
      nodes[id].parent = -1;
    }
    void attach(int id, int parent, int index) {
      auto& sib = nodes[parent].kids;
      if (index > static_cast<int>(sib.size())) index = static_cast<int>(sib.size());
      sib.insert(sib.begin() + index, id);
      nodes[id].parent = parent;
    }
  };

  EditScript derive_script() {
    Working w;
    w.nodes = src_.nodes;
    // grow the partner maps as inserts allocate fresh ids
    auto partner_of_t = [this](int t) { return tgt2src_[t]; };

    EditScript script;
    auto emit = [&](EditOp op, int node, int parent, int index, NodeLabel label,
                    const std::string& text) {
      script.actions.push_back({op, label, text});
      script.concrete.push_back({op, node, parent, index, label, text});
    };

    std::vector<char> in_order_s(w.nodes.size(), 0), in_order_t(tgt_.nodes.size(), 0);
    auto in_order_s_at = [&](int id) -> char& {
      if (id >= static_cast<int>(in_order_s.size())) in_order_s.resize(id + 1, 0);
      return in_order_s[id];
    };

    // FindPos: position for target node x among its parent's children in the
    // working tree, counting only siblings already marked in order
    auto find_pos = [&](int x) -> int {
      const int y = tgt_.nodes[x].parent;
      int v = -1;
      for (int sib : tgt_.nodes[y].kids) {
        if (sib == x) break;
        if (in_order_t[sib]) v = sib;
      }
      if (v < 0) return 0;
      const int u = tgt2src_[v];
      return w.index_of(u) + 1;
    };

    std::deque<int> queue;
    queue.push_back(0);
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop_front();
      for (int k : tgt_.nodes[x].kids) queue.push_back(k);

      int partner = partner_of_t(x);
      if (x != 0) {
        const int y = tgt_.nodes[x].parent;
        const int z = tgt2src_[y];
        if (partner < 0) {
          const int k = find_pos(x);
          const int fresh = static_cast<int>(w.nodes.size());
          Arena::Node node;
          node.label = tgt_.nodes[x].label;
          node.text = tgt_.nodes[x].text;
          node.parent = -1;
          w.nodes.push_back(std::move(node));
          w.attach(fresh, z, k);
          emit(EditOp::Ins, fresh, z, k, tgt_.nodes[x].label, tgt_.nodes[x].text);
          tgt2src_[x] = fresh;
          if (fresh >= static_cast<int>(src2tgt_.size())) src2tgt_.resize(fresh + 1, -1);
          src2tgt_[fresh] = x;
          partner = fresh;
          in_order_s_at(fresh) = 1;
          in_order_t[x] = 1;
        } else {
          if (w.nodes[partner].text != tgt_.nodes[x].text) {
            emit(EditOp::Upd, partner, -1, -1, tgt_.nodes[x].label, tgt_.nodes[x].text);
            w.nodes[partner].text = tgt_.nodes[x].text;
          }
          if (w.nodes[partner].parent != z) {
            w.detach(partner);
            const int k = find_pos(x);  // after detach, so k is the final slot
            w.attach(partner, z, k);
            emit(EditOp::Mov, partner, z, k, tgt_.nodes[x].label, "");
            in_order_s_at(partner) = 1;
            in_order_t[x] = 1;
          }
        }
      }
      align_children(partner, x, w, in_order_s_at, in_order_t, find_pos, emit);
    }

    // deletions: unmatched source nodes, children before parents
    std::vector<int> postorder;
    collect_postorder(0, postorder);
    for (int s : postorder) {
      if (s == 0 || matched_s(s)) continue;
      w.detach(s);
      emit(EditOp::Del, s, -1, -1, src_.nodes[s].label, src_.nodes[s].text);
    }

    if (!equal_subtree_w(w, 0, 0)) {
      std::fprintf(stderr, "treediff: derivation failed to converge; emitting rewrite\n");
      return rewrite_script();
    }
    return script;
  }

  template <typename InOrderS, typename FindPos, typename Emit>
  void align_children(int wnode, int x, Working& w, InOrderS& in_order_s_at,
                      std::vector<char>& in_order_t, FindPos& find_pos, Emit& emit) {
    if (wnode < 0) return;
    for (int k : w.nodes[wnode].kids) in_order_s_at(k) = 0;
    for (int k : tgt_.nodes[x].kids) in_order_t[k] = 0;

    std::vector<int> s1, s2;
    for (int k : w.nodes[wnode].kids) {
      const int p = k < static_cast<int>(src2tgt_.size()) ? src2tgt_[k] : -1;
      if (p >= 0 && tgt_.nodes[p].parent == x) s1.push_back(k);
    }
    for (int k : tgt_.nodes[x].kids) {
      const int p = tgt2src_[k];
      if (p >= 0 && w.nodes[p].parent == wnode) s2.push_back(k);
    }
    auto eq = [&](int a, int b) { return src2tgt_[a] == b; };
    auto common = lcs_pairs(s1, s2, eq);
    for (const auto& [a, b] : common) {
      in_order_s_at(a) = 1;
      in_order_t[b] = 1;
    }
    for (int a : s1) {
      const int b = src2tgt_[a];
      if (std::find_if(common.begin(), common.end(),
                       [&](const auto& pr) { return pr.first == a; }) != common.end())
        continue;
      w.detach(a);
      const int k = find_pos(b);
      w.attach(a, wnode, k);
      emit(EditOp::Mov, a, wnode, k, w.nodes[a].label, "");
      in_order_s_at(a) = 1;
      in_order_t[b] = 1;
    }
  }

  bool equal_subtree_w(const Working& w, int wi, int ti) const {
    const auto& a = w.nodes[wi];
    const auto& b = tgt_.nodes[ti];
    if (a.label != b.label || a.text != b.text) return false;
    if (a.kids.size() != b.kids.size()) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
      if (!equal_subtree_w(w, a.kids[i], b.kids[i])) return false;
    return true;
  }

  EditScript rewrite_script() {
    EditScript script;
    std::vector<int> postorder;
    collect_postorder(0, postorder);
    for (int s : postorder) {
      if (s == 0) continue;
      script.actions.push_back({EditOp::Del, src_.nodes[s].label, src_.nodes[s].text});
      script.concrete.push_back({EditOp::Del, s, -1, -1, src_.nodes[s].label, src_.nodes[s].text});
    }
    int fresh = static_cast<int>(src_.nodes.size());
    std::vector<int> fresh_of(tgt_.nodes.size(), 0);
    for (int t = 1; t < static_cast<int>(tgt_.nodes.size()); ++t) {
      const int parent_t = tgt_.nodes[t].parent;
      const int parent_w = parent_t == 0 ? 0 : fresh_of[parent_t];
      int index = 0;
      for (int sib : tgt_.nodes[parent_t].kids) {
        if (sib == t) break;
        ++index;
      }
      fresh_of[t] = fresh;
      script.actions.push_back({EditOp::Ins, tgt_.nodes[t].label, tgt_.nodes[t].text});
      script.concrete.push_back(
          {EditOp::Ins, fresh, parent_w, index, tgt_.nodes[t].label, tgt_.nodes[t].text});
      ++fresh;
    }
    return script;
  }

  Arena src_;
  Arena tgt_;
  std::vector<int> src2tgt_;
  std::vector<int> tgt2src_;
};

}  // namespace

// Bounded exact refinement. The matching phases above are linear-ish and work
// well on method-sized trees, but on tiny trees they can miss subtree moves
// that were also edited inside, inflating the script. Minimal scripts under
// moves are NP-hard in general, so the exact pass only runs when both trees
// are small: best-first search over whole tree states, admissible per-label
// node-count bound, hard expansion budget. Returns a strictly shorter script
// or nothing.
namespace {

struct XNode {
  int id = 0;  // source arena id; inserts get fresh negative ids until renumbering
  NodeLabel label = NodeLabel::Other;
  std::string text;
  std::vector<XNode> kids;
};

using XForest = std::vector<XNode>;
using XPath = std::vector<int>;

XNode xnode_of(const AstNode& ast, int& next_id) {
  XNode n;
  n.id = next_id++;
  n.label = ast.label;
  n.text = ast.text;
  for (const AstNode& k : ast.children) n.kids.push_back(xnode_of(k, next_id));
  return n;
}

void xshape_key(const XNode& n, std::string& out) {
  out += '<';
  out += std::to_string(static_cast<int>(n.label));
  out += '|';
  out += std::to_string(n.text.size());
  out += '=';
  out += n.text;
  for (const XNode& k : n.kids) xshape_key(k, out);
  out += '>';
}

std::string xforest_key(const XForest& f) {
  std::string out;
  out.reserve(48);
  for (const XNode& n : f) xshape_key(n, out);
  return out;
}

void xpaths_rec(const XNode& n, XPath& cur, std::vector<XPath>& out) {
  out.push_back(cur);
  for (int i = 0; i < static_cast<int>(n.kids.size()); ++i) {
    cur.push_back(i);
    xpaths_rec(n.kids[static_cast<std::size_t>(i)], cur, out);
    cur.pop_back();
  }
}

std::vector<XPath> xpaths(const XForest& f) {
  std::vector<XPath> out;
  XPath cur;
  for (int i = 0; i < static_cast<int>(f.size()); ++i) {
    cur.push_back(i);
    xpaths_rec(f[static_cast<std::size_t>(i)], cur, out);
    cur.pop_back();
  }
  return out;
}

XNode& xat(XForest& f, const XPath& p) {
  XNode* n = &f[static_cast<std::size_t>(p[0])];
  for (std::size_t i = 1; i < p.size(); ++i) n = &n->kids[static_cast<std::size_t>(p[i])];
  return *n;
}

const XNode& xat(const XForest& f, const XPath& p) {
  const XNode* n = &f[static_cast<std::size_t>(p[0])];
  for (std::size_t i = 1; i < p.size(); ++i) n = &n->kids[static_cast<std::size_t>(p[i])];
  return *n;
}

XNode xtake(XForest& f, const XPath& p) {
  if (p.size() == 1) {
    XNode n = std::move(f[static_cast<std::size_t>(p[0])]);
    f.erase(f.begin() + p[0]);
    return n;
  }
  XPath pp(p.begin(), p.end() - 1);
  XNode& parent = xat(f, pp);
  XNode n = std::move(parent.kids[static_cast<std::size_t>(p.back())]);
  parent.kids.erase(parent.kids.begin() + p.back());
  return n;
}

// parent_id 0 means the virtual container (forest top level)
void xput(XForest& f, const XPath& parent, int index, XNode n) {
  if (parent.empty()) {
    f.insert(f.begin() + index, std::move(n));
  } else {
    XNode& par = xat(f, parent);
    par.kids.insert(par.kids.begin() + index, std::move(n));
  }
}

struct XOp {
  EditOp op = EditOp::Ins;
  int node = 0;
  int parent = -1;
  int index = -1;
  NodeLabel label = NodeLabel::Other;
  std::string text;
};

using XCounts = std::map<std::pair<int, std::string>, int>;

void xcount(const XNode& n, XCounts& counts) {
  counts[{static_cast<int>(n.label), n.text}] += 1;
  for (const XNode& k : n.kids) xcount(k, counts);
}

void xcount_ast(const AstNode& n, XCounts& counts) {
  counts[{static_cast<int>(n.label), n.text}] += 1;
  for (const AstNode& k : n.children) xcount_ast(k, counts);
}

// sum over labels of max(nodes to shed, nodes still missing); every single
// action improves that sum by at most one
int xbound(const XCounts& cur, const XCounts& tgt) {
  std::map<int, std::pair<int, int>> per_label;
  for (const auto& [key, c] : cur) {
    auto it = tgt.find(key);
    const int g = it == tgt.end() ? 0 : it->second;
    if (c > g) per_label[key.first].first += c - g;
  }
  for (const auto& [key, g] : tgt) {
    auto it = cur.find(key);
    const int c = it == cur.end() ? 0 : it->second;
    if (g > c) per_label[key.first].second += g - c;
  }
  int h = 0;
  for (const auto& [_, sd] : per_label) h += std::max(sd.first, sd.second);
  return h;
}

class ExactSearch {
 public:
  ExactSearch(const AstNode& source, const AstNode& target, int limit, std::size_t budget)
      : limit_(limit), budget_(budget) {
    int next_id = 1;
    start_.push_back(xnode_of(source, next_id));
    fresh_start_ = next_id;  // first id past the source preorder ids
    xcount_ast(target, target_counts_);
    target_key_ = [&] {
      int probe = 1;
      XForest t;
      t.push_back(xnode_of(target, probe));
      return xforest_key(t);
    }();
  }

  // returns ops of a script with at most limit_ actions, or nothing
  bool run(std::vector<XOp>& out) {
    struct Rec {
      XForest forest;
      XOp op;
      int parent = -1;
      int g = 0;
    };
    struct Item {
      int f = 0;
      int g = 0;
      std::uint64_t seq = 0;
      std::size_t idx = 0;
      bool operator>(const Item& o) const {
        if (f != o.f) return f > o.f;
        if (g != o.g) return g < o.g;
        return seq > o.seq;
      }
    };

    std::vector<Rec> pool;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    std::unordered_map<std::string, int> best;
    std::uint64_t seq = 0;

    {
      XCounts cur;
      for (const XNode& n : start_) xcount(n, cur);
      const int h = xbound(cur, target_counts_);
      pool.push_back({start_, XOp{}, -1, 0});
      best[xforest_key(start_)] = 0;
      open.push({h, 0, seq++, 0});
    }

    while (!open.empty()) {
      const Item item = open.top();
      open.pop();
      if (item.f > limit_) break;
      const XForest forest = pool[item.idx].forest;
      const std::string key = xforest_key(forest);
      {
        auto it = best.find(key);
        if (it != best.end() && it->second < item.g) continue;
      }
      if (key == target_key_) {
        std::vector<XOp> rev;
        for (int at = static_cast<int>(item.idx); pool[at].parent >= 0; at = pool[at].parent)
          rev.push_back(pool[at].op);
        out.assign(rev.rbegin(), rev.rend());
        renumber(out);
        return true;
      }
      if (budget_ == 0) return false;
      --budget_;

      XCounts cur;
      for (const XNode& n : forest) xcount(n, cur);

      // per-label surplus/deficit backing the bound, adjusted per candidate
      // op below so hopeless successors are pruned before any copying
      std::map<int, std::pair<int, int>> per_label;
      for (const auto& [key2, c] : cur) {
        auto it = target_counts_.find(key2);
        const int t = it == target_counts_.end() ? 0 : it->second;
        if (c > t) per_label[key2.first].first += c - t;
      }
      for (const auto& [key2, t] : target_counts_) {
        auto it = cur.find(key2);
        const int c = it == cur.end() ? 0 : it->second;
        if (t > c) per_label[key2.first].second += t - c;
      }
      int h_here = 0;
      for (const auto& [_, sd] : per_label) h_here += std::max(sd.first, sd.second);

      auto count_of = [](const XCounts& m, int label, const std::string& text) {
        auto it = m.find({label, text});
        return it == m.end() ? 0 : it->second;
      };
      auto label_sd = [&per_label](int label) {
        auto it = per_label.find(label);
        return it == per_label.end() ? std::pair<int, int>{0, 0} : it->second;
      };
      auto h_delta = [&](int label, const std::string& text, int delta) {
        auto [surplus, deficit] = label_sd(label);
        const int before = std::max(surplus, deficit);
        const int c = count_of(cur, label, text);
        const int t = count_of(target_counts_, label, text);
        if (delta > 0) {
          if (t > c)
            deficit -= 1;
          else
            surplus += 1;
        } else {
          if (c > t)
            surplus -= 1;
          else
            deficit += 1;
        }
        return h_here - before + std::max(surplus, deficit);
      };
      auto h_retext = [&](int label, const std::string& from, const std::string& to) {
        auto [surplus, deficit] = label_sd(label);
        const int before = std::max(surplus, deficit);
        if (count_of(cur, label, from) > count_of(target_counts_, label, from))
          surplus -= 1;
        else
          deficit += 1;
        if (count_of(target_counts_, label, to) > count_of(cur, label, to))
          deficit -= 1;
        else
          surplus += 1;
        return h_here - before + std::max(surplus, deficit);
      };

      auto offer = [&](XForest&& next, XOp op, int h) {
        const int g = item.g + 1;
        std::string k = xforest_key(next);
        auto it = best.find(k);
        if (it != best.end() && it->second <= g) return;
        best[std::move(k)] = g;
        pool.push_back({std::move(next), std::move(op), static_cast<int>(item.idx), g});
        open.push({g + h, g, seq++, pool.size() - 1});
      };

      const std::vector<XPath> paths = xpaths(forest);

      // retext within the label
      for (const XPath& p : paths) {
        const XNode& n = xat(forest, p);
        for (const auto& [key2, _] : target_counts_) {
          if (key2.first != static_cast<int>(n.label) || key2.second == n.text) continue;
          const int h = h_retext(key2.first, n.text, key2.second);
          if (item.g + 1 + h > limit_) continue;
          XForest next = forest;
          xat(next, p).text = key2.second;
          offer(std::move(next), XOp{EditOp::Upd, n.id, -1, -1, n.label, key2.second}, h);
        }
      }

      // delete childless nodes
      for (const XPath& p : paths) {
        const XNode& n = xat(forest, p);
        if (!n.kids.empty()) continue;
        const int h = h_delta(static_cast<int>(n.label), n.text, -1);
        if (item.g + 1 + h > limit_) continue;
        XForest next = forest;
        xtake(next, p);
        offer(std::move(next), XOp{EditOp::Del, n.id, -1, -1, n.label, n.text}, h);
      }

      // insert one node shape the target contains
      for (const auto& [key2, _] : target_counts_) {
        const int h = h_delta(key2.first, key2.second, +1);
        if (item.g + 1 + h > limit_) continue;
        XNode leaf;
        leaf.label = static_cast<NodeLabel>(key2.first);
        leaf.text = key2.second;
        for (int i = 0; i <= static_cast<int>(forest.size()); ++i) {
          XForest next = forest;
          leaf.id = next_temp_;
          xput(next, {}, i, leaf);
          XOp op{EditOp::Ins, next_temp_, 0, i, leaf.label, leaf.text};
          const std::size_t before = pool.size();
          offer(std::move(next), std::move(op), h);
          if (pool.size() > before) --next_temp_;
        }
        for (const XPath& p : paths) {
          const XNode& parent = xat(forest, p);
          for (int i = 0; i <= static_cast<int>(parent.kids.size()); ++i) {
            XForest next = forest;
            leaf.id = next_temp_;
            XPath pp = p;
            xput(next, pp, i, leaf);
            XOp op{EditOp::Ins, next_temp_, parent.id, i, leaf.label, leaf.text};
            const std::size_t before = pool.size();
            offer(std::move(next), std::move(op), h);
            if (pool.size() > before) --next_temp_;
          }
        }
      }

      // move any subtree anywhere outside itself; the bound cannot change
      if (item.g + 1 + h_here <= limit_) {
        for (const XPath& p : paths) {
          XForest base = forest;
          const XNode sub = xtake(base, p);
          for (int i = 0; i <= static_cast<int>(base.size()); ++i) {
            XForest next = base;
            xput(next, {}, i, sub);
            offer(std::move(next), XOp{EditOp::Mov, sub.id, 0, i, sub.label, ""}, h_here);
          }
          for (const XPath& q : xpaths(base)) {
            const XNode& dest = xat(base, q);
            for (int i = 0; i <= static_cast<int>(dest.kids.size()); ++i) {
              XForest next = base;
              xput(next, q, i, sub);
              offer(std::move(next), XOp{EditOp::Mov, sub.id, dest.id, i, sub.label, ""}, h_here);
            }
          }
        }
      }
    }
    return false;
  }

 private:
  // inserted nodes carried negative placeholders during the search; the
  // script contract hands them the next free ids in emission order
  void renumber(std::vector<XOp>& ops) const {
    std::map<int, int> fresh;
    int next = fresh_start_;
    for (XOp& op : ops) {
      if (op.op == EditOp::Ins) {
        fresh[op.node] = next;
        op.node = next;
        ++next;
      } else if (op.node < 0) {
        op.node = fresh.at(op.node);
      }
      if (op.parent < 0 && op.parent != -1) op.parent = fresh.at(op.parent);
    }
  }

  XForest start_;
  XCounts target_counts_;
  std::string target_key_;
  int limit_ = 0;
  std::size_t budget_ = 0;
  int fresh_start_ = 1;
  int next_temp_ = -2;
};

bool refine_small(const AstNode& source, const AstNode& target, EditScript& script) {
  constexpr std::size_t kExactCap = 12;
  constexpr std::size_t kExactBudget = 2000000;
  if (script.size() <= 1) return false;
  if (java::node_count(source) > kExactCap || java::node_count(target) > kExactCap) return false;
  XCounts src_counts, tgt_counts;
  xcount_ast(source, src_counts);
  xcount_ast(target, tgt_counts);
  if (static_cast<int>(script.size()) <= xbound(src_counts, tgt_counts)) return false;
  ExactSearch search(source, target, static_cast<int>(script.size()) - 1, kExactBudget);
  std::vector<XOp> ops;
  if (!search.run(ops)) return false;
  EditScript refined;
  for (const XOp& op : ops) {
    refined.actions.push_back({op.op, op.label, op.text});
    refined.concrete.push_back({op.op, op.node, op.parent, op.index, op.label, op.text});
  }
  script = std::move(refined);
  return true;
}

}  // namespace

std::string_view edit_op_name(EditOp op) {
  switch (op) {
    case EditOp::Ins: return "INS";
    case EditOp::Del: return "DEL";
    case EditOp::Upd: return "UPD";
    case EditOp::Mov: return "MOV";
  }
  return "INS";
}

std::string EditAction::tag() const {
  return std::string(edit_op_name(op)) + ":" + std::string(java::label_name(label));
}

std::vector<std::string> EditScript::tags() const {
  std::vector<std::string> out;
  out.reserve(actions.size());
  for (const EditAction& a : actions) out.push_back(a.tag());
  return out;
}

EditScript edit_script(const AstNode& source, const AstNode& target) {
  EditScript script = Differ(source, target).run();
  refine_small(source, target, script);
  return script;
}

std::vector<std::string> action_document(const EditScript& script) { return script.tags(); }

ActionComparison compare_action_lists(const EditScript& a, const EditScript& b) {
  std::map<std::string, int> ca, cb;
  for (const std::string& w : a.tags()) ca[w] += 1;
  for (const std::string& w : b.tags()) cb[w] += 1;
  ActionComparison cmp;
  cmp.same_multiset = ca == cb;
  cmp.same_set = ca.size() == cb.size() &&
                 std::equal(ca.begin(), ca.end(), cb.begin(),
                            [](const auto& x, const auto& y) { return x.first == y.first; });
  return cmp;
}

double token_bag_similarity(const std::vector<java::Token>& a,
                            const std::vector<java::Token>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::map<std::string, int> count;
  for (const java::Token& t : a) count[t.text] += 1;
  int common = 0;
  for (const java::Token& t : b) {
    auto it = count.find(t.text);
    if (it != count.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  return 2.0 * common / static_cast<double>(a.size() + b.size());
}

std::vector<std::pair<std::size_t, std::size_t>> map_methods(
    const std::vector<java::MethodInfo>& buggy, const std::vector<java::MethodInfo>& fixed) {
  constexpr double kSimilarityFloor = 0.6;
  std::vector<int> match(buggy.size(), -1);
  std::vector<bool> taken(fixed.size(), false);

  // two name-driven rounds: exact signature, then name alone
  for (const bool need_arity : {true, false}) {
    for (std::size_t b = 0; b < buggy.size(); ++b) {
      if (match[b] != -1) continue;
      int pick = -1;
      double pick_sim = -1.0;
      for (std::size_t f = 0; f < fixed.size(); ++f) {
        if (taken[f] || fixed[f].name != buggy[b].name) continue;
        if (need_arity && fixed[f].arity != buggy[b].arity) continue;
        const double sim = token_bag_similarity(buggy[b].tokens, fixed[f].tokens);
        if (sim > pick_sim) {
          pick_sim = sim;
          pick = static_cast<int>(f);
        }
      }
      if (pick != -1) {
        match[b] = pick;
        taken[pick] = true;
      }
    }
  }

  // leftover pairing by whole-body similarity, best pairs first
  struct Cand {
    double sim;
    std::size_t b, f;
  };
  std::vector<Cand> cands;
  for (std::size_t b = 0; b < buggy.size(); ++b) {
    if (match[b] != -1) continue;
    for (std::size_t f = 0; f < fixed.size(); ++f) {
      if (taken[f]) continue;
      const double sim = token_bag_similarity(buggy[b].tokens, fixed[f].tokens);
      if (sim >= kSimilarityFloor) cands.push_back({sim, b, f});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    if (x.b != y.b) return x.b < y.b;
    return x.f < y.f;
  });
  for (const Cand& c : cands) {
    if (match[c.b] != -1 || taken[c.f]) continue;
    match[c.b] = static_cast<int>(c.f);
    taken[c.f] = true;
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t b = 0; b < buggy.size(); ++b)
    if (match[b] != -1) pairs.emplace_back(b, static_cast<std::size_t>(match[b]));
  return pairs;
}

}  // namespace mutgen
