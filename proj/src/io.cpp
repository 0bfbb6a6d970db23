#include "triact/io.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <string_view>

#include "triact/extend.hpp"

namespace triact {

namespace {

[[noreturn]] void fail_at(size_t offset, const std::string& what) {
  throw G0Error("parse error at offset " + std::to_string(offset) + ": " +
                what);
}

const char* cls_token(LetterClass c) {
  switch (c) {
    case LetterClass::R: return "r";
    case LetterClass::S: return "s";
    case LetterClass::U: return "u";
    default: throw G0Error("G0 letters do not appear in dumps");
  }
}

LetterClass cls_from_token(std::string_view t, size_t off) {
  if (t == "r") return LetterClass::R;
  if (t == "s") return LetterClass::S;
  if (t == "u") return LetterClass::U;
  fail_at(off, "unknown generator class '" + std::string(t) + "'");
}

TripleClass tclass_from_token(std::string_view t, size_t off) {
  for (TripleClass c : {TripleClass::ATriple, TripleClass::TTriple,
                        TripleClass::S3Stabilized, TripleClass::Free,
                        TripleClass::Unknown})
    if (to_string(c) == t) return c;
  fail_at(off, "unknown triple class '" + std::string(t) + "'");
}

std::string gen_name(LetterClass c, int index) {
  return cls_token(c) + std::to_string(index);
}

int parse_int(std::string_view t, size_t off, const char* what) {
  int v = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || p != t.data() + t.size())
    fail_at(off, std::string(what) + " is not an integer: '" + std::string(t) +
                     "'");
  return v;
}

bool token_clean(const std::string& s) {
  return !s.empty() && s.find_first_of(" \t\r\n") == std::string::npos;
}

// free text allowed at line ends (config values, rejection reasons); must
// survive a tokenize/rejoin round trip to keep dumps canonical
bool tail_clean(const std::string& s) {
  return !s.empty() && s.front() != ' ' && s.back() != ' ' &&
         s.find_first_of("\t\r\n") == std::string::npos &&
         s.find("  ") == std::string::npos;
}

struct Line {
  std::string_view text;
  size_t offset = 0;
};

std::vector<Line> split_lines(const std::string& bytes) {
  if (bytes.empty()) fail_at(0, "empty input");
  if (bytes.back() != '\n')
    fail_at(bytes.size(), "missing final newline (file truncated?)");
  std::vector<Line> lines;
  size_t start = 0;
  for (size_t i = 0; i < bytes.size(); ++i) {
    const char c = bytes[i];
    if (c == '\n') {
      lines.push_back({std::string_view(bytes).substr(start, i - start), start});
      start = i + 1;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      fail_at(i, "control character in line");
    }
  }
  return lines;
}

std::vector<std::string_view> tokens(const Line& ln) {
  if (ln.text.empty()) fail_at(ln.offset, "empty line");
  std::vector<std::string_view> out;
  size_t pos = 0;
  for (;;) {
    const size_t sp = ln.text.find(' ', pos);
    const std::string_view tok =
        ln.text.substr(pos, sp == std::string_view::npos ? sp : sp - pos);
    if (tok.empty()) fail_at(ln.offset + pos, "stray whitespace");
    out.push_back(tok);
    if (sp == std::string_view::npos) return out;
    pos = sp + 1;
  }
}

void require_tokens(const Line& ln, const std::vector<std::string_view>& tk,
                    size_t count, const char* shape) {
  if (tk.size() != count)
    fail_at(ln.offset, std::string("expected '") + shape + "'");
}

// ---- seed group section ----------------------------------------------

void write_g0_body(std::ostream& os, const G0Spec& g) {
  for (const auto& nm : g.names)
    if (!token_clean(nm))
      throw G0Error("element name is not a clean token: '" + nm + "'");
  for (const auto& nm : g.point_names)
    if (!token_clean(nm))
      throw G0Error("point name is not a clean token: '" + nm + "'");
  const int n = g.order, np = g.npoints();
  os << "a " << g.a << '\n';
  for (int e = 0; e < n; ++e) {
    os << "act";
    for (int x = 0; x < np; ++x) os << ' ' << g.act[e * np + x];
    os << '\n';
  }
  for (int e = 0; e < n; ++e) {
    os << "mult";
    for (int f = 0; f < n; ++f) os << ' ' << g.mult[e * n + f];
    os << '\n';
  }
  for (const auto& nm : g.names) os << "name " << nm << '\n';
  for (const auto& nm : g.point_names) os << "point " << nm << '\n';
  os << "t " << g.t << '\n';
  os << "x0 " << g.x0 << '\n';
}

// Body keys in canonical order; counts are implied (order = #name lines,
// points = #point lines). Returns the raw G0Spec; callers finalize.
G0Spec parse_g0_body(const std::vector<Line>& lines, size_t begin, size_t end,
                     size_t anchor) {
  static constexpr const char* kKeys[] = {"a",    "act", "mult", "name",
                                          "point", "t",   "x0"};
  std::vector<std::vector<size_t>> group(7);
  int cur = 0;
  for (size_t j = begin; j < end; ++j) {
    const auto tk = tokens(lines[j]);
    while (cur < 7 && tk[0] != kKeys[cur]) ++cur;
    if (cur == 7)
      fail_at(lines[j].offset, "unknown or out-of-order seed key '" +
                                   std::string(tk[0]) + "'");
    group[cur].push_back(j);
  }
  for (int k : {0, 5, 6})
    if (group[k].size() != 1)
      fail_at(anchor, std::string("seed section needs exactly one '") +
                          kKeys[k] + "' line");
  const int n = static_cast<int>(group[3].size());
  const int np = static_cast<int>(group[4].size());
  if (n == 0) fail_at(anchor, "seed section has no 'name' lines");
  if (np == 0) fail_at(anchor, "seed section has no 'point' lines");
  if (static_cast<int>(group[1].size()) != n)
    fail_at(anchor, "act row count does not match the element count");
  if (static_cast<int>(group[2].size()) != n)
    fail_at(anchor, "mult row count does not match the element count");

  G0Spec g;
  g.order = n;
  auto single_int = [&](int k, const char* what) {
    const Line& ln = lines[group[k][0]];
    const auto tk = tokens(ln);
    require_tokens(ln, tk, 2, what);
    return parse_int(tk[1], ln.offset, what);
  };
  g.a = single_int(0, "a <element>");
  g.t = single_int(5, "t <element>");
  g.x0 = single_int(6, "x0 <point>");
  g.act.resize(static_cast<size_t>(n) * np);
  for (int e = 0; e < n; ++e) {
    const Line& ln = lines[group[1][e]];
    const auto tk = tokens(ln);
    if (tk.size() != static_cast<size_t>(np) + 1)
      fail_at(ln.offset, "act row length does not match the point count");
    for (int x = 0; x < np; ++x)
      g.act[e * np + x] = parse_int(tk[x + 1], ln.offset, "act entry");
  }
  g.mult.resize(static_cast<size_t>(n) * n);
  for (int e = 0; e < n; ++e) {
    const Line& ln = lines[group[2][e]];
    const auto tk = tokens(ln);
    if (tk.size() != static_cast<size_t>(n) + 1)
      fail_at(ln.offset, "mult row length does not match the element count");
    for (int f = 0; f < n; ++f)
      g.mult[e * n + f] = parse_int(tk[f + 1], ln.offset, "mult entry");
  }
  auto names_of = [&](int k, const char* what) {
    std::vector<std::string> out;
    for (size_t j : group[k]) {
      const auto tk = tokens(lines[j]);
      require_tokens(lines[j], tk, 2, what);
      out.emplace_back(tk[1]);
    }
    return out;
  };
  g.names = names_of(3, "name <token>");
  g.point_names = names_of(4, "point <token>");
  return g;
}

// ---- log lines ---------------------------------------------------------

std::string log_line(size_t k, const StageEntry& e) {
  std::ostringstream os;
  os << "step " << k << ' ';
  switch (e.op) {
    case StageOp::Activate:
      os << "activate " << cls_token(e.cls) << ' ' << e.gen_index;
      break;
    case StageOp::Extend:
      os << "extend " << cls_token(e.cls) << ' ' << e.gen_index << ' '
         << (e.inverse ? "bwd" : "fwd") << ' ' << e.at << ' ' << e.new_base;
      break;
    case StageOp::Join:
      os << "join " << cls_token(e.cls) << ' ' << e.gen_index << ' '
         << e.target.x << ' ' << e.target.y << ' ' << e.target.z << ' '
         << to_string(e.target_class);
      break;
  }
  if (e.accepted) {
    os << " ok";
  } else {
    if (!tail_clean(e.reject_reason))
      throw G0Error("rejection reason is not token-clean: '" +
                    e.reject_reason + "'");
    os << " rej " << e.reject_reason;
  }
  return os.str();
}

StageEntry parse_log_line(const Line& ln, size_t expect_index) {
  const auto tk = tokens(ln);
  if (tk.size() < 5 || tk[0] != "step")
    fail_at(ln.offset, "expected 'step <k> <op> ...'");
  if (parse_int(tk[1], ln.offset, "step index") !=
      static_cast<int>(expect_index))
    fail_at(ln.offset, "log steps must be consecutive from 0");
  StageEntry e;
  size_t vpos = 0;
  if (tk[2] == "activate") {
    e.op = StageOp::Activate;
    e.cls = cls_from_token(tk[3], ln.offset);
    e.gen_index = parse_int(tk[4], ln.offset, "generator index");
    vpos = 5;
  } else if (tk[2] == "extend") {
    if (tk.size() < 8) fail_at(ln.offset, "short extend line");
    e.op = StageOp::Extend;
    e.cls = cls_from_token(tk[3], ln.offset);
    e.gen_index = parse_int(tk[4], ln.offset, "generator index");
    if (tk[5] == "fwd")
      e.inverse = false;
    else if (tk[5] == "bwd")
      e.inverse = true;
    else
      fail_at(ln.offset, "extend direction must be fwd or bwd");
    e.at = parse_int(tk[6], ln.offset, "anchor point");
    e.new_base = parse_int(tk[7], ln.offset, "new base point");
    vpos = 8;
  } else if (tk[2] == "join") {
    if (tk.size() < 9) fail_at(ln.offset, "short join line");
    e.op = StageOp::Join;
    e.cls = cls_from_token(tk[3], ln.offset);
    e.gen_index = parse_int(tk[4], ln.offset, "generator index");
    e.target.x = parse_int(tk[5], ln.offset, "triple point");
    e.target.y = parse_int(tk[6], ln.offset, "triple point");
    e.target.z = parse_int(tk[7], ln.offset, "triple point");
    e.target_class = tclass_from_token(tk[8], ln.offset);
    vpos = 9;
  } else {
    fail_at(ln.offset, "unknown log op '" + std::string(tk[2]) + "'");
  }
  if (tk.size() <= vpos) fail_at(ln.offset, "log line missing verdict");
  if (tk[vpos] == "ok") {
    if (tk.size() != vpos + 1)
      fail_at(ln.offset, "trailing tokens after 'ok'");
    e.accepted = true;
  } else if (tk[vpos] == "rej") {
    if (tk.size() == vpos + 1)
      fail_at(ln.offset, "rejected step needs a reason");
    e.accepted = false;
    std::string reason;
    for (size_t i = vpos + 1; i < tk.size(); ++i) {
      if (i > vpos + 1) reason += ' ';
      reason += std::string(tk[i]);
    }
    e.reject_reason = std::move(reason);
  } else {
    fail_at(ln.offset, "verdict must be ok or rej");
  }
  return e;
}

}  // namespace

// ---- writer -------------------------------------------------------------

std::string dump_state(const ActionState& st, const ConfigKV& config) {
  std::ostringstream os;
  os << kDumpHeader << '\n';
  os << "policy " << kPlacementPolicy << '\n';

  os << "[config]\n";
  ConfigKV kv = config;
  std::sort(kv.begin(), kv.end());
  for (size_t i = 0; i < kv.size(); ++i) {
    const auto& [key, value] = kv[i];
    if (!token_clean(key))
      throw G0Error("config key is not a clean token: '" + key + "'");
    if (i > 0 && kv[i - 1].first == key)
      throw G0Error("duplicate config key: " + key);
    if (!tail_clean(value))
      throw G0Error("config value for '" + key + "' is not token-clean");
    os << "cfg " << key << ' ' << value << '\n';
  }

  os << "[g0]\n";
  write_g0_body(os, st.g0);

  os << "[generators]\n";
  for (size_t i = 0; i < st.genmaps.size(); ++i)
    os << "gen " << i << ' ' << cls_token(st.genmaps[i].cls) << ' '
       << st.genmaps[i].index << '\n';

  os << "[log]\n";
  for (size_t k = 0; k < st.log.size(); ++k)
    os << log_line(k, st.log[k]) << '\n';

  os << "[maps]\n";
  for (const GenMap& m : st.genmaps) {
    const std::string name = gen_name(m.cls, m.index);
    for (PointId p = 0; p < static_cast<PointId>(m.forward.size()); ++p)
      if (m.forward[p] != kUndefined)
        os << "pair " << name << ' ' << p << ' ' << m.forward[p] << '\n';
  }

  os << "[points]\n";
  os << "base " << st.n_base << '\n';
  for (size_t i = 0; i < st.block_step.size(); ++i)
    os << "block " << i << ' ' << st.block_step[i] << '\n';
  return os.str();
}

// ---- reader -------------------------------------------------------------

LoadedDump load_dump(const std::string& bytes) {
  const std::vector<Line> lines = split_lines(bytes);
  if (lines[0].text != kDumpHeader) {
    if (lines[0].text.starts_with("triact-dump"))
      throw G0Error("unsupported dump version: '" + std::string(lines[0].text) +
                    "'");
    fail_at(0, std::string("expected header '") + kDumpHeader + "'");
  }
  if (lines.size() < 2 ||
      lines[1].text != std::string("policy ") + kPlacementPolicy) {
    if (lines.size() >= 2 && lines[1].text.starts_with("policy "))
      throw G0Error("unsupported canonical-form policy: '" +
                    std::string(lines[1].text.substr(7)) + "'");
    fail_at(lines.size() < 2 ? bytes.size() : lines[1].offset,
            "expected the policy line");
  }

  // fixed (sorted) section order; content runs to the next '[' line
  static constexpr const char* kSections[] = {"[config]",     "[g0]",
                                              "[generators]", "[log]",
                                              "[maps]",       "[points]"};
  size_t begin[6], end[6];
  size_t i = 2;
  for (int s = 0; s < 6; ++s) {
    if (i >= lines.size() || lines[i].text != kSections[s])
      fail_at(i < lines.size() ? lines[i].offset : bytes.size(),
              std::string("expected section ") + kSections[s]);
    ++i;
    begin[s] = i;
    while (i < lines.size() && !lines[i].text.starts_with("[")) ++i;
    end[s] = i;
  }
  if (i != lines.size())
    fail_at(lines[i].offset, "unexpected section '" +
                                 std::string(lines[i].text) + "'");

  // config
  ConfigKV config;
  for (size_t j = begin[0]; j < end[0]; ++j) {
    const Line& ln = lines[j];
    const auto tk = tokens(ln);
    if (tk.size() < 3 || tk[0] != "cfg")
      fail_at(ln.offset, "expected 'cfg <key> <value>'");
    std::string key(tk[1]);
    if (!config.empty() && config.back().first >= key)
      fail_at(ln.offset, "config keys must be sorted and unique");
    const std::string value(ln.text.substr(4 + key.size() + 1));
    config.emplace_back(std::move(key), value);
  }

  G0Spec raw =
      parse_g0_body(lines, begin[1], end[1], lines[begin[1] - 1].offset);

  // generators
  std::vector<std::pair<LetterClass, int>> gens;
  for (size_t j = begin[2]; j < end[2]; ++j) {
    const Line& ln = lines[j];
    const auto tk = tokens(ln);
    require_tokens(ln, tk, 4, "gen <pos> <class> <index>");
    if (tk[0] != "gen") fail_at(ln.offset, "expected 'gen' line");
    if (parse_int(tk[1], ln.offset, "generator position") !=
        static_cast<int>(gens.size()))
      fail_at(ln.offset, "generator positions must be consecutive from 0");
    const LetterClass cls = cls_from_token(tk[2], ln.offset);
    const int index = parse_int(tk[3], ln.offset, "generator index");
    if (index < 0) fail_at(ln.offset, "generator index must be nonnegative");
    gens.emplace_back(cls, index);
  }

  // raw map pairs: resolved after the point count is known
  struct RawPair {
    size_t gen = 0;
    int src = 0, dst = 0;
    size_t offset = 0;
  };
  std::vector<RawPair> pairs;
  size_t group_pos = 0;
  int last_src = -1;
  for (size_t j = begin[4]; j < end[4]; ++j) {
    const Line& ln = lines[j];
    const auto tk = tokens(ln);
    require_tokens(ln, tk, 4, "pair <gen> <src> <dst>");
    if (tk[0] != "pair") fail_at(ln.offset, "expected 'pair' line");
    if (tk[1].size() < 2)
      fail_at(ln.offset, "malformed generator name '" + std::string(tk[1]) +
                             "'");
    const LetterClass cls = cls_from_token(tk[1].substr(0, 1), ln.offset);
    const int index =
        parse_int(tk[1].substr(1), ln.offset, "generator name index");
    size_t pos = 0;
    while (pos < gens.size() && gens[pos] != std::make_pair(cls, index)) ++pos;
    if (pos == gens.size())
      fail_at(ln.offset, "pair references undeclared generator '" +
                             std::string(tk[1]) + "'");
    if (pos < group_pos)
      fail_at(ln.offset, "map pairs must follow the generator order");
    if (pos > group_pos) {
      group_pos = pos;
      last_src = -1;
    }
    const int src = parse_int(tk[2], ln.offset, "pair source");
    const int dst = parse_int(tk[3], ln.offset, "pair target");
    if (src < last_src)
      fail_at(ln.offset, "map pairs must be sorted by source id");
    last_src = src;
    pairs.push_back({pos, src, dst, ln.offset});
  }

  // points
  int base = -1;
  std::vector<int> blocks;
  for (size_t j = begin[5]; j < end[5]; ++j) {
    const Line& ln = lines[j];
    const auto tk = tokens(ln);
    if (tk[0] == "base") {
      require_tokens(ln, tk, 2, "base <count>");
      if (j != begin[5]) fail_at(ln.offset, "'base' must come first");
      base = parse_int(tk[1], ln.offset, "base count");
      if (base < 0) fail_at(ln.offset, "base count must be nonnegative");
    } else if (tk[0] == "block") {
      require_tokens(ln, tk, 3, "block <index> <step>");
      if (parse_int(tk[1], ln.offset, "block index") !=
          static_cast<int>(blocks.size()))
        fail_at(ln.offset, "block indices must be consecutive from 0");
      blocks.push_back(parse_int(tk[2], ln.offset, "block step"));
    } else {
      fail_at(ln.offset, "expected 'base' or 'block' line");
    }
  }
  if (base < 0)
    fail_at(end[5] < lines.size() ? lines[end[5]].offset : bytes.size(),
            "points section is missing the 'base' line");

  // assembly: finalize the seed, then rebuild the state and re-run the
  // same invariant sweep that guards live mutation
  ActionState st;
  st.g0 = finalize_g0(std::move(raw));
  st.n_base = base;
  st.block_step = std::move(blocks);
  st.A = Triple{st.g0.x0, st.g0.image(st.g0.x0, st.g0.a),
                st.g0.image(st.g0.x0, st.g0.a2)};
  const int n = st.n_points();
  for (const auto& [cls, index] : gens) {
    GenMap m;
    m.cls = cls;
    m.index = index;
    m.forward.assign(n, kUndefined);
    m.backward.assign(n, kUndefined);
    st.genmaps.push_back(std::move(m));
  }
  for (const RawPair& rp : pairs) {
    if (rp.src < 0 || rp.src >= n) fail_at(rp.offset, "pair source out of range");
    if (rp.dst < 0 || rp.dst >= n) fail_at(rp.offset, "pair target out of range");
    GenMap& m = st.genmaps[rp.gen];
    if (m.forward[rp.src] != kUndefined || m.backward[rp.dst] != kUndefined)
      throw G0Error("injectivity(" + gen_name(m.cls, m.index) + "," +
                    std::to_string(rp.src) + ")");
    m.forward[rp.src] = rp.dst;
    m.backward[rp.dst] = rp.src;
  }
  for (size_t j = begin[3]; j < end[3]; ++j) {
    StageEntry e = parse_log_line(lines[j], j - begin[3]);
    const Line& ln = lines[j];
    auto in_range = [&](PointId p) { return p >= 0 && p < n; };
    if (e.op == StageOp::Extend &&
        (!in_range(e.at) || !(e.new_base == kUndefined || in_range(e.new_base))))
      fail_at(ln.offset, "log point out of range");
    if (e.op == StageOp::Join &&
        !(in_range(e.target.x) && in_range(e.target.y) && in_range(e.target.z)))
      fail_at(ln.offset, "log triple out of range");
    st.log.push_back(std::move(e));
  }
  validate_state(st);
  return {std::move(st), std::move(config)};
}

// ---- standalone seed files ----------------------------------------------

std::string dump_g0(const G0Spec& g0) {
  std::ostringstream os;
  os << kG0Header << '\n';
  write_g0_body(os, g0);
  return os.str();
}

G0Spec parse_g0(const std::string& bytes) {
  const std::vector<Line> lines = split_lines(bytes);
  if (lines[0].text != kG0Header) {
    if (lines[0].text.starts_with("triact-g0"))
      throw G0Error("unsupported seed file version: '" +
                    std::string(lines[0].text) + "'");
    fail_at(0, std::string("expected header '") + kG0Header + "'");
  }
  return finalize_g0(parse_g0_body(lines, 1, lines.size(), lines[0].offset));
}

// ---- replay ---------------------------------------------------------------

ActionState replay_log(const G0Spec& g0, const std::vector<StageEntry>& log,
                       int word_bound, long classify_budget) {
  ActionState st = init_state(g0);
  for (size_t k = 0; k < log.size(); ++k) {
    const StageEntry& e = log[k];
    switch (e.op) {
      case StageOp::Activate:
        introduce_generator(st, e.cls, e.gen_index);
        break;
      case StageOp::Extend:
        extend_generator(st, e.cls, e.gen_index, e.inverse, e.at);
        break;
      case StageOp::Join:
        connect_triple(st, e.target, e.target_class, e.gen_index, word_bound,
                       classify_budget);
        break;
    }
    if (st.log.size() != k + 1 || !(st.log[k] == e))
      throw G0Error("replay diverged at step " + std::to_string(k) +
                    ", expected: " + log_line(k, e));
  }
  return st;
}

}  // namespace triact
