#include "meritum/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "meritum/arguments.hpp"
#include "meritum/common.hpp"

namespace meritum {

namespace {

// relative volume weight of a starved weak topic
constexpr double kStarveWeight = 0.35;
// planted coupling ratios; claiming a topic strong pays off through marker
// mass, so each topic becomes a duel between pro's "we" and con's "you"
constexpr double kWeakWordRatio = 0.5;    // #words|weak as a fraction of #words|strong
constexpr double kStrongYouRatio = 0.35;  // #you|strong as a fraction of #you|weak
constexpr double kWeakWeRatio = 0.33;     // #we|weak as a fraction of #we|strong
constexpr int kMaxRedraws = 512;

void validate_config(const SynthConfig& c) {
  if (c.debates < 2) throw DataError("synth: need at least two debates");
  if (c.topics < 1) throw DataError("synth: need at least one topic");
  if (c.words_per_topic < 2) throw DataError("synth: need at least two words per topic");
  if (c.discussion_turns < 2 || c.discussion_turns % 2 != 0)
    throw DataError("synth: discussion turns must be even and at least two");
  if (c.sentences_per_argument < 1) throw DataError("synth: arguments need a sentence");
  if (c.turn_word_budget < 2 * c.topics) throw DataError("synth: word budget too small");
  if (c.budget_skew < 0.0 || c.budget_skew > 0.9) throw DataError("synth: budget skew outside [0, 0.9]");
  if (c.strong_tilt < 1.0) throw DataError("synth: strong tilt must be at least one");
  if (c.concede_prob < 0.0 || c.concede_prob > 1.0)
    throw DataError("synth: concede probability outside [0,1]");
  if (c.markers_per_sentence < 0) throw DataError("synth: negative marker count");
  if (c.pile_prob < 0.0 || c.pile_prob > 1.0)
    throw DataError("synth: pile probability outside [0,1]");
  if (c.shift_bias < 0.0 || c.shift_bias > 1.0) throw DataError("synth: shift bias outside [0,1]");
  if (c.score_margin < 0.0) throw DataError("synth: negative score margin");
  if (c.noise < 0.0 || c.noise >= 0.5) throw DataError("synth: noise must lie in [0, 0.5)");
}

SparseVector resolve_weights(const SynthConfig& c) {
  SparseVector w = c.planted_weights;
  if (w.empty()) {
    auto put = [&w](const char* name, double v) {
      if (v != 0.0) w.set(name, v);
    };
    put("#words|full", c.payload_words);
    put("#words|full|strong", c.payload_claim);
    put("#words|full|weak", kWeakWordRatio * c.payload_claim);
    put("#you|full|weak", c.payload_marker);
    put("#you|full|strong", kStrongYouRatio * c.payload_marker);
    put("#we|full|strong", c.payload_we);
    put("#we|full|weak", kWeakWeRatio * c.payload_we);
    return w;
  }
  for (const auto& [name, value] : w) {
    (void)value;
    size_t p1 = name.find('|');
    if (p1 == std::string::npos) throw DataError("synth: planted weight lacks a phase: " + name);
    std::string base = name.substr(0, p1);
    std::string rest = name.substr(p1 + 1);
    if (base != "#words" && base != "#we" && base != "#you")
      throw DataError("synth: unsupported planted weight base: " + name);
    if (rest != "full" && rest != "full|strong" && rest != "full|weak")
      throw DataError("synth: unsupported planted weight coupling: " + name);
  }
  return w;
}

std::string topic_word(int topic, int j) {
  return "t" + std::to_string(topic) + "w" + std::to_string(j);
}

Token word_token(const std::string& surface, const std::string& pos) {
  Token t;
  t.surface = surface;
  t.lemma = surface;
  t.pos = pos;
  return t;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

// weight of base-coordinate counts under a claimed strength
double coupled_weight(const SparseVector& w, const char* base, Strength s) {
  std::string b(base);
  return w.get(b + "|full") + w.get(b + "|full|" + to_string(s));
}

struct DebatePlan {
  StrengthAssignment h;
  std::vector<std::vector<char>> starved;     // [side][topic]
  std::vector<int> focus;                     // marker focus topic per turn
  std::vector<std::vector<int>> counts;       // topic words per (turn, topic)
  std::vector<std::vector<std::vector<int>>> markers;  // per (turn, topic, sentence)
  double f_pro = 0.0;
  double f_con = 0.0;
};

}  // namespace

SynthResult synth_generate(const SynthConfig& cfg) {
  validate_config(cfg);
  const SparseVector w = resolve_weights(cfg);
  Rng rng(cfg.seed);
  SynthResult out;
  out.weights = w;
  const int K = cfg.topics;
  const int spa = cfg.sentences_per_argument;
  const int M = cfg.markers_per_sentence;

  // turn plan: opening pair, alternating discussion, closing pair
  std::vector<std::pair<Side, Phase>> plan;
  plan.emplace_back(Side::Pro, Phase::Opening);
  plan.emplace_back(Side::Con, Phase::Opening);
  for (int t = 0; t < cfg.discussion_turns; ++t)
    plan.emplace_back(t % 2 == 0 ? Side::Pro : Side::Con, Phase::Discussion);
  plan.emplace_back(Side::Pro, Phase::Closing);
  plan.emplace_back(Side::Con, Phase::Closing);
  const size_t T = plan.size();

  // starved topics drop out of the starving side's discussion turns, except
  // when the turn focuses them
  auto present = [&](const DebatePlan& p, size_t t, int k) {
    if (plan[t].second != Phase::Discussion) return true;
    if (p.focus[t] == k) return true;
    int s = plan[t].first == Side::Pro ? 0 : 1;
    return !p.starved[s][k];
  };

  for (int d = 0; d < cfg.debates; ++d) {
    // pre-noise winners alternate so the corpus stays balanced
    const bool want_pro = d % 2 == 0;
    DebatePlan best;
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      DebatePlan p;
      p.h.pro.assign(K, Strength::Weak);
      p.h.con.assign(K, Strength::Weak);
      p.starved.assign(2, std::vector<char>(K, 0));

      // balanced split: one side strong on ceil(K/2) topics, the other on the rest
      std::vector<int> ids(K);
      for (int k = 0; k < K; ++k) ids[k] = k;
      shuffle(ids, rng);
      const int s_pro = rng.bernoulli(0.5) ? (K + 1) / 2 : K / 2;
      for (int i = 0; i < K; ++i) {
        if (i < s_pro)
          p.h.pro[ids[i]] = Strength::Strong;
        else
          p.h.con[ids[i]] = Strength::Strong;
      }

      // sides starve weak topics independently; a side with no strong topics
      // keeps at least one weak topic alive for its discussion turns
      for (int s = 0; s < 2; ++s) {
        const auto& own = s == 0 ? p.h.pro : p.h.con;
        int weak_alive = 0, last_weak = -1;
        for (int k = 0; k < K; ++k) {
          if (own[k] != Strength::Weak) continue;
          last_weak = k;
          if (rng.bernoulli(cfg.concede_prob))
            p.starved[s][k] = 1;
          else
            ++weak_alive;
        }
        const bool all_weak = std::count(own.begin(), own.end(), Strength::Strong) == 0;
        if (all_weak && weak_alive == 0 && last_weak >= 0) p.starved[s][last_weak] = 0;
      }

      // one side gets a slightly larger word budget
      const double skew =
          cfg.budget_skew * (static_cast<double>(rng.below(2001)) - 1000.0) / 1000.0;
      const double budget[2] = {cfg.turn_word_budget * (1.0 + skew),
                                cfg.turn_word_budget * (1.0 - skew)};

      // per-side volume profile over topics, tilted toward strong ones
      std::vector<std::vector<double>> weight(2, std::vector<double>(K));
      for (int s = 0; s < 2; ++s)
        for (int k = 0; k < K; ++k) {
          if (p.starved[s][k]) {
            weight[s][k] = kStarveWeight;
            continue;
          }
          double u = 1.0 + static_cast<double>(rng.below(9));
          const Strength own = s == 0 ? p.h.pro[k] : p.h.con[k];
          if (own == Strength::Strong) u *= cfg.strong_tilt;
          weight[s][k] = u;
        }

      // each turn hammers one focus topic with its markers; exactly half of a
      // side's turns (rounded down) focus strong topics, so both sides spend
      // identical marker totals and only the placement differs
      p.focus.assign(T, -1);
      for (int s = 0; s < 2; ++s) {
        std::vector<int> strong_ids, weak_ids;
        const auto& own = s == 0 ? p.h.pro : p.h.con;
        for (int k = 0; k < K; ++k)
          (own[k] == Strength::Strong ? strong_ids : weak_ids).push_back(k);
        std::vector<size_t> turns;
        for (size_t t = 0; t < T; ++t)
          if ((plan[t].first == Side::Pro) == (s == 0)) turns.push_back(t);
        size_t ns = turns.size() / 2;
        if (strong_ids.empty()) ns = 0;
        if (weak_ids.empty()) ns = turns.size();
        std::vector<char> is_strong(turns.size(), 0);
        for (size_t i = 0; i < ns; ++i) is_strong[i] = 1;
        shuffle(is_strong, rng);
        // a side may pile all focuses of one kind on a single topic instead of
        // spreading them; piles are what make placement collisions decisive
        const int pile_strong =
            rng.bernoulli(cfg.pile_prob) && !strong_ids.empty()
                ? strong_ids[rng.below(strong_ids.size())] : -1;
        const int pile_weak =
            rng.bernoulli(cfg.pile_prob) && !weak_ids.empty()
                ? weak_ids[rng.below(weak_ids.size())] : -1;
        for (size_t i = 0; i < turns.size(); ++i) {
          const auto& pool = is_strong[i] ? strong_ids : weak_ids;
          const int pile = is_strong[i] ? pile_strong : pile_weak;
          p.focus[turns[i]] = pile >= 0 ? pile : pool[rng.below(pool.size())];
        }
      }

      // topic-word counts and marker counts, drawn before any ordering choices
      p.counts.assign(T, std::vector<int>(K, 0));
      p.markers.assign(T, std::vector<std::vector<int>>(K));
      for (size_t t = 0; t < T; ++t) {
        const int s = plan[t].first == Side::Pro ? 0 : 1;
        double wsum = 0.0;
        for (int k = 0; k < K; ++k)
          if (present(p, t, k)) wsum += weight[s][k];
        for (int k = 0; k < K; ++k) {
          if (!present(p, t, k)) continue;
          const int jitter = static_cast<int>(rng.below(5)) - 2;
          const double share = budget[s] * weight[s][k] / wsum;
          p.counts[t][k] = std::max(3, static_cast<int>(std::lround(share)) + jitter);
          p.markers[t][k].resize(spa, 0);
          // per-sentence jitter keeps the marker coordinate non-constant, so
          // range scaling does not collapse it
          if (M > 0 && p.focus[t] == k)
            for (int sidx = 0; sidx < spa; ++sidx)
              p.markers[t][k][sidx] = std::max(1, M - 1 + static_cast<int>(rng.below(3)));
        }
      }

      // realized word and marker totals per side and topic
      std::vector<std::vector<double>> words(2, std::vector<double>(K, 0.0));
      std::vector<std::vector<double>> marks(2, std::vector<double>(K, 0.0));
      for (size_t t = 0; t < T; ++t) {
        const int s = plan[t].first == Side::Pro ? 0 : 1;
        for (int k = 0; k < K; ++k) {
          if (!present(p, t, k)) continue;
          double mk = 0.0;
          for (int m : p.markers[t][k]) mk += m;
          words[s][k] += p.counts[t][k] + spa + mk;  // "the" opener plus markers count too
          marks[s][k] += mk;
        }
      }

      // planted decision scores, per topic an optimistic search over claimed
      // strengths with never-both-strong, exactly the predictor's rule
      auto side_term = [&](int s, int k, Strength claim) {
        const Strength own = s == 0 ? p.h.pro[k] : p.h.con[k];
        const double we = own == Strength::Strong ? marks[s][k] : 0.0;
        const double you = own == Strength::Weak ? marks[s][k] : 0.0;
        return coupled_weight(w, "#words", claim) * words[s][k] +
               coupled_weight(w, "#we", claim) * we + coupled_weight(w, "#you", claim) * you;
      };
      p.f_pro = 0.0;
      p.f_con = 0.0;
      for (int k = 0; k < K; ++k) {
        const double sw = side_term(0, k, Strength::Strong) - side_term(1, k, Strength::Weak);
        const double ws = side_term(0, k, Strength::Weak) - side_term(1, k, Strength::Strong);
        const double ww = side_term(0, k, Strength::Weak) - side_term(1, k, Strength::Weak);
        p.f_pro += std::max(sw, std::max(ws, ww));
        p.f_con -= std::min(sw, std::min(ws, ww));
      }

      best = std::move(p);
      // accept once the outcome rule (sign of the optimistic pro score) and
      // the prediction rule (optimistic pro vs. optimistic con) both land
      // decisively on the scheduled winner
      const double mid = best.f_pro - best.f_con;
      if ((best.f_pro > 0.0) == want_pro && (mid > 0.0) == want_pro &&
          std::abs(best.f_pro) >= cfg.score_margin && std::abs(mid) >= cfg.score_margin)
        break;
    }

    DebateTranscript debate;
    char idbuf[32];
    std::snprintf(idbuf, sizeof idbuf, "synth-%03d", d);
    debate.id = idbuf;
    debate.motion = "synthetic motion";

    const Side planted_winner = best.f_pro > 0.0 ? Side::Pro : Side::Con;
    const bool flip = rng.bernoulli(cfg.noise);
    debate.outcome = (planted_winner == Side::Pro) != flip ? Outcome::ProWin : Outcome::ConWin;

    std::vector<std::vector<int>> labels(T);
    for (size_t t = 0; t < T; ++t) {
      const auto [side, phase] = plan[t];
      Turn turn;
      turn.speaker = side == Side::Pro ? "pro speaker" : "con speaker";
      turn.side = side;
      turn.phase = phase;

      // winners tend to open a turn on weak topics and move to strong ones
      std::vector<int> strong_topics, weak_topics, order;
      for (int k = 0; k < K; ++k) {
        if (!present(best, t, k)) continue;
        const Strength own = side == Side::Pro ? best.h.pro[k] : best.h.con[k];
        (own == Strength::Strong ? strong_topics : weak_topics).push_back(k);
      }
      if (side == planted_winner && rng.bernoulli(cfg.shift_bias)) {
        shuffle(weak_topics, rng);
        shuffle(strong_topics, rng);
        order = weak_topics;
        order.insert(order.end(), strong_topics.begin(), strong_topics.end());
      } else {
        order = strong_topics;
        order.insert(order.end(), weak_topics.begin(), weak_topics.end());
        shuffle(order, rng);
      }

      for (int k : order) {
        const Strength own = side == Side::Pro ? best.h.pro[k] : best.h.con[k];
        const std::string marker = own == Strength::Strong ? "we" : "you";
        int remaining = best.counts[t][k];
        for (int sidx = 0; sidx < spa; ++sidx) {
          int take = remaining;
          if (sidx + 1 < spa) {
            const int left = spa - sidx;
            const int lo = remaining >= left ? 1 : 0;
            const int hi = remaining - lo * (left - 1);
            const int even = remaining / left;
            const int jitter = static_cast<int>(rng.below(5)) - 2;
            take = std::clamp(even + jitter, lo, hi);
          }
          remaining -= take;
          Sentence sent;
          sent.tokens.push_back(word_token("the", "DT"));
          for (int j = 0; j < take; ++j)
            sent.tokens.push_back(
                word_token(topic_word(k, static_cast<int>(rng.below(cfg.words_per_topic))), "NN"));
          for (int j = 0; j < best.markers[t][k][sidx]; ++j)
            sent.tokens.push_back(word_token(marker, "PRP"));
          sent.tokens.push_back(word_token(".", "."));
          std::string text;
          for (const Token& tok : sent.tokens) {
            if (!text.empty() && tok.pos != ".") text += ' ';
            text += tok.surface;
          }
          sent.text = text;
          turn.sentences.push_back(std::move(sent));
          labels[t].push_back(k);
        }
      }
      debate.turns.push_back(std::move(turn));
    }

    SegmentedDebate seg;
    seg.debate_id = debate.id;
    seg.K = K;
    seg.model.K = K;
    seg.labels = labels;
    seg.arguments = chunk_arguments(labels, debate);

    out.strengths.push_back(std::move(best.h));
    out.scores.push_back(best.f_pro - best.f_con);
    out.flipped.push_back(flip);
    out.truth.debates.push_back(std::move(seg));
    out.corpus.debates.push_back(std::move(debate));
  }
  return out;
}

}  // namespace meritum
