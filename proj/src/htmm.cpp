#include "meritum/htmm.hpp"

#include <cmath>
#include <limits>

namespace meritum {

namespace {

bool punctuation_pos(const std::string& pos) {
  if (pos.empty()) return false;
  for (char c : pos)
    if (std::isalpha(static_cast<unsigned char>(c))) return false;
  return true;
}

bool usable_token(const Token& tok, const Stopwords& stopwords) {
  if (punctuation_pos(tok.pos)) return false;
  return stopwords.find(lowercase(tok.surface)) == stopwords.end();
}

enum class Group { All, Pro, Con, Moderator };

bool in_group(Side side, Group g) {
  switch (g) {
    case Group::All: return true;
    case Group::Pro: return side == Side::Pro;
    case Group::Con: return side == Side::Con;
    case Group::Moderator: return side == Side::Moderator;
  }
  return false;
}

struct Stream {
  std::vector<std::vector<int>> sents;      // word ids, nonempty
  std::vector<char> fresh;                  // turn-initial positions draw fresh
  std::vector<std::pair<int, int>> refs;    // (turn, sentence)
};

Stream make_stream(const DebateTranscript& debate, Group group,
                   const std::map<std::string, int>& word_index, const Stopwords& stopwords) {
  Stream st;
  for (size_t t = 0; t < debate.turns.size(); ++t) {
    const Turn& turn = debate.turns[t];
    if (!in_group(turn.side, group)) continue;
    bool first_in_turn = true;
    for (size_t s = 0; s < turn.sentences.size(); ++s) {
      std::vector<int> ids;
      for (const Token& tok : turn.sentences[s].tokens) {
        if (!usable_token(tok, stopwords)) continue;
        auto it = word_index.find(lowercase(tok.surface));
        if (it != word_index.end()) ids.push_back(it->second);
      }
      if (ids.empty()) continue;
      st.sents.push_back(std::move(ids));
      st.fresh.push_back(first_in_turn ? 1 : 0);
      st.refs.emplace_back(static_cast<int>(t), static_cast<int>(s));
      first_in_turn = false;
    }
  }
  return st;
}

std::pair<std::vector<std::string>, std::map<std::string, int>> build_vocab(
    const DebateTranscript& debate, const Stopwords& stopwords) {
  std::set<std::string> words;
  for (const Turn& turn : debate.turns)
    for (const Sentence& sent : turn.sentences)
      for (const Token& tok : sent.tokens)
        if (usable_token(tok, stopwords)) words.insert(lowercase(tok.surface));
  std::vector<std::string> vocab(words.begin(), words.end());
  std::map<std::string, int> index;
  for (size_t i = 0; i < vocab.size(); ++i) index[vocab[i]] = static_cast<int>(i);
  return {vocab, index};
}

struct StreamCounts {
  std::vector<double> fresh_draws;               // per topic
  std::vector<std::vector<double>> word_counts;  // K x V (empty when unused)
  double stay_weight = 0.0;
  double free_positions = 0.0;
  double loglik = 0.0;
  // per-sentence topic posterior, kept for decoding
  std::vector<std::vector<double>> gamma;
};

// Scaled forward-backward over one stream. The two latent flavours of a
// topic (fresh draw vs carried over) share emissions, so backward messages
// collapse to one value per topic.
StreamCounts forward_backward(const Stream& st, const std::vector<double>& theta, double stay,
                              const std::vector<std::vector<double>>& log_topic_word,
                              bool want_words, size_t vocab_size, bool want_gamma) {
  const int K = static_cast<int>(theta.size());
  const int T = static_cast<int>(st.sents.size());
  StreamCounts out;
  out.fresh_draws.assign(K, 0.0);
  if (want_words) out.word_counts.assign(K, std::vector<double>(vocab_size, 0.0));
  if (T == 0) return out;

  std::vector<std::vector<double>> emit(T, std::vector<double>(K));
  std::vector<double> shift(T);
  for (int t = 0; t < T; ++t) {
    double best = -std::numeric_limits<double>::infinity();
    for (int z = 0; z < K; ++z) {
      double le = 0.0;
      for (int w : st.sents[t]) le += log_topic_word[z][w];
      emit[t][z] = le;
      best = std::max(best, le);
    }
    shift[t] = best;
    for (int z = 0; z < K; ++z) emit[t][z] = std::exp(emit[t][z] - best);
  }

  std::vector<std::vector<double>> a1(T, std::vector<double>(K)), a0(T, std::vector<double>(K));
  std::vector<double> c(T);
  for (int t = 0; t < T; ++t) {
    double total = 0.0;
    if (t == 0 || st.fresh[t]) {
      for (int z = 0; z < K; ++z) {
        a1[t][z] = theta[z] * emit[t][z];
        a0[t][z] = 0.0;
        total += a1[t][z];
      }
    } else {
      for (int z = 0; z < K; ++z) {
        // previous position is normalized, so the fresh branch needs no sum
        a1[t][z] = (1.0 - stay) * theta[z] * emit[t][z];
        a0[t][z] = stay * emit[t][z] * (a1[t - 1][z] + a0[t - 1][z]);
        total += a1[t][z] + a0[t][z];
      }
    }
    if (!(total > 0.0)) throw NumericalError("forward pass collapsed at sentence " + std::to_string(t));
    c[t] = total;
    for (int z = 0; z < K; ++z) { a1[t][z] /= total; a0[t][z] /= total; }
    out.loglik += std::log(total) + shift[t];
  }

  std::vector<std::vector<double>> b(T, std::vector<double>(K, 1.0));
  for (int t = T - 2; t >= 0; --t) {
    if (st.fresh[t + 1]) {
      double val = 0.0;
      for (int z = 0; z < K; ++z) val += theta[z] * emit[t + 1][z] * b[t + 1][z];
      val /= c[t + 1];
      for (int z = 0; z < K; ++z) b[t][z] = val;
    } else {
      double fresh_part = 0.0;
      for (int z = 0; z < K; ++z) fresh_part += (1.0 - stay) * theta[z] * emit[t + 1][z] * b[t + 1][z];
      for (int z = 0; z < K; ++z)
        b[t][z] = (fresh_part + stay * emit[t + 1][z] * b[t + 1][z]) / c[t + 1];
    }
  }

  if (want_gamma) out.gamma.assign(T, std::vector<double>(K));
  for (int t = 0; t < T; ++t) {
    double stay_post = 0.0;
    for (int z = 0; z < K; ++z) {
      double g1 = a1[t][z] * b[t][z];
      double g0 = a0[t][z] * b[t][z];
      out.fresh_draws[z] += g1;
      stay_post += g0;
      double g = g1 + g0;
      if (want_gamma) out.gamma[t][z] = g;
      if (want_words)
        for (int w : st.sents[t]) out.word_counts[z][w] += g;
    }
    if (t > 0 && !st.fresh[t]) {
      out.stay_weight += stay_post;
      out.free_positions += 1.0;
    }
  }
  return out;
}

std::vector<double> map_normalize(const std::vector<double>& counts, double pseudo) {
  double total = 0.0;
  std::vector<double> out(counts.size());
  for (double v : counts) total += v + (pseudo - 1.0);
  for (size_t i = 0; i < counts.size(); ++i) out[i] = (counts[i] + (pseudo - 1.0)) / total;
  return out;
}

double dirichlet_log_prior(const std::vector<double>& dist, double pseudo) {
  if (pseudo == 1.0) return 0.0;
  double s = 0.0;
  for (double v : dist) s += (pseudo - 1.0) * std::log(v);
  return s;
}

std::vector<std::vector<double>> log_matrix(const std::vector<std::vector<double>>& m) {
  std::vector<std::vector<double>> out(m.size());
  for (size_t i = 0; i < m.size(); ++i) {
    out[i].resize(m[i].size());
    for (size_t j = 0; j < m[i].size(); ++j) out[i][j] = std::log(m[i][j]);
  }
  return out;
}

bool converged(double prev, double cur, double rel_tol) {
  return std::abs(cur - prev) / (1.0 + std::abs(prev)) < rel_tol;
}

int argmax_tie_low(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

}  // namespace

void validate_model(const HtmmModel& model) {
  auto check_dist = [](const std::vector<double>& d, const char* what) {
    double s = 0.0;
    for (double v : d) {
      if (!(v >= 0.0) || !std::isfinite(v))
        throw NumericalError(std::string(what) + " has an invalid entry");
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-9)
      throw NumericalError(std::string(what) + " does not sum to 1 (off by " +
                           std::to_string(s - 1.0) + ")");
  };
  if (model.K <= 0) throw NumericalError("model has no topics");
  if (static_cast<int>(model.topic_word.size()) != model.K)
    throw NumericalError("topic_word row count does not match K");
  for (const auto& row : model.topic_word) check_dist(row, "topic_word row");
  check_dist(model.mixture_full, "mixture_full");
  check_dist(model.mixture_pro, "mixture_pro");
  check_dist(model.mixture_con, "mixture_con");
  if (!(model.transition_stay >= 0.0 && model.transition_stay <= 1.0))
    throw NumericalError("transition_stay outside [0, 1]");
}

FitResult fit_htmm(const DebateTranscript& debate, int K, const HtmmHyper& hyper, uint64_t seed,
                   const Stopwords& stopwords) {
  if (K < 1) throw DataError("debate \"" + debate.id + "\": topic count must be at least 1");
  auto [vocab, index] = build_vocab(debate, stopwords);
  if (vocab.empty()) throw DataError("debate \"" + debate.id + "\": no usable tokens");
  Stream stream = make_stream(debate, Group::All, index, stopwords);
  if (static_cast<int>(stream.sents.size()) < K)
    throw DataError("debate \"" + debate.id + "\": fewer than K=" + std::to_string(K) +
                    " sentences with usable tokens");

  const size_t V = vocab.size();
  // seeded hard assignment gives data-informed, symmetry-broken start values
  Rng rng(seed);
  std::vector<double> fresh(K, 0.0);
  std::vector<std::vector<double>> words(K, std::vector<double>(V, 0.0));
  for (const auto& sent : stream.sents) {
    int z = static_cast<int>(rng.below(static_cast<uint64_t>(K)));
    fresh[z] += 1.0;
    for (int w : sent) words[z][w] += 1.0;
  }
  std::vector<double> theta = map_normalize(fresh, hyper.mixture_pseudo);
  std::vector<std::vector<double>> beta(K);
  for (int z = 0; z < K; ++z) beta[z] = map_normalize(words[z], hyper.word_pseudo);
  double stay = 0.5;

  FitResult result;
  double prev = 0.0;
  for (int iter = 0; iter < hyper.max_iter; ++iter) {
    auto logb = log_matrix(beta);
    StreamCounts counts = forward_backward(stream, theta, stay, logb, true, V, false);
    double logpost = counts.loglik + dirichlet_log_prior(theta, hyper.mixture_pseudo);
    for (int z = 0; z < K; ++z) logpost += dirichlet_log_prior(beta[z], hyper.word_pseudo);
    result.trace.push_back({counts.loglik, logpost});
    if (iter > 0 && converged(prev, logpost, hyper.rel_tol)) break;
    prev = logpost;

    theta = map_normalize(counts.fresh_draws, hyper.mixture_pseudo);
    for (int z = 0; z < K; ++z) beta[z] = map_normalize(counts.word_counts[z], hyper.word_pseudo);
    if (counts.free_positions > 0.0) stay = counts.stay_weight / counts.free_positions;
  }

  HtmmModel& m = result.model;
  m.K = K;
  m.vocab = std::move(vocab);
  m.word_index = std::move(index);
  m.topic_word = std::move(beta);
  m.mixture_full = theta;
  m.mixture_pro = theta;
  m.mixture_con = theta;
  m.transition_stay = stay;
  validate_model(m);
  return result;
}

FitResult side_conditioned_refit(const HtmmModel& model, const DebateTranscript& debate,
                                 const HtmmHyper& hyper, const Stopwords& stopwords) {
  validate_model(model);
  FitResult result;
  result.model = model;  // topic_word and mixture_full carried over untouched
  HtmmModel& m = result.model;
  const int K = model.K;

  Stream pro = make_stream(debate, Group::Pro, model.word_index, stopwords);
  Stream con = make_stream(debate, Group::Con, model.word_index, stopwords);
  auto logb = log_matrix(model.topic_word);

  // Start from the pooled mixture and a neutral stay probability so the
  // result depends only on the frozen topics and the transcript, making the
  // refit idempotent.
  std::vector<double> theta_pro = model.mixture_full;
  std::vector<double> theta_con = model.mixture_full;
  double stay = 0.5;

  double prev = 0.0;
  for (int iter = 0; iter < hyper.max_iter; ++iter) {
    StreamCounts cp = forward_backward(pro, theta_pro, stay, logb, false, 0, false);
    StreamCounts cc = forward_backward(con, theta_con, stay, logb, false, 0, false);
    double logpost = cp.loglik + cc.loglik +
                     dirichlet_log_prior(theta_pro, hyper.mixture_pseudo) +
                     dirichlet_log_prior(theta_con, hyper.mixture_pseudo);
    result.trace.push_back({cp.loglik + cc.loglik, logpost});
    if (iter > 0 && converged(prev, logpost, hyper.rel_tol)) break;
    prev = logpost;

    theta_pro = map_normalize(cp.fresh_draws, hyper.mixture_pseudo);
    theta_con = map_normalize(cc.fresh_draws, hyper.mixture_pseudo);
    double free_total = cp.free_positions + cc.free_positions;
    if (free_total > 0.0) stay = (cp.stay_weight + cc.stay_weight) / free_total;
    (void)K;
  }

  m.mixture_pro = theta_pro;
  m.mixture_con = theta_con;
  m.transition_stay = stay;
  validate_model(m);
  return result;
}

std::vector<std::vector<int>> assign_topics(const HtmmModel& model, const DebateTranscript& debate,
                                            const Stopwords& stopwords) {
  validate_model(model);
  std::vector<std::vector<int>> labels(debate.turns.size());
  for (size_t t = 0; t < debate.turns.size(); ++t)
    labels[t].assign(debate.turns[t].sentences.size(), -1);

  struct GroupSpec {
    Group group;
    const std::vector<double>* mixture;
  };
  const GroupSpec specs[] = {{Group::Pro, &model.mixture_pro},
                             {Group::Con, &model.mixture_con},
                             {Group::Moderator, &model.mixture_full}};
  for (const auto& spec : specs) {
    Stream st = make_stream(debate, spec.group, model.word_index, stopwords);
    if (st.sents.empty()) continue;
    auto logb = log_matrix(model.topic_word);
    StreamCounts counts =
        forward_backward(st, *spec.mixture, model.transition_stay, logb, false, 0, true);
    for (size_t i = 0; i < st.refs.size(); ++i) {
      auto [t, s] = st.refs[i];
      labels[t][s] = argmax_tie_low(counts.gamma[i]);
    }
  }

  // sentences with no usable tokens inherit within the turn
  for (size_t t = 0; t < labels.size(); ++t) {
    const Side side = debate.turns[t].side;
    const std::vector<double>& mixture = side == Side::Pro   ? model.mixture_pro
                                         : side == Side::Con ? model.mixture_con
                                                             : model.mixture_full;
    for (size_t s = 0; s < labels[t].size(); ++s) {
      if (labels[t][s] >= 0) continue;
      labels[t][s] = s > 0 ? labels[t][s - 1] : argmax_tie_low(mixture);
    }
  }
  return labels;
}

std::vector<double> topic_coherence(const HtmmModel& model, const DebateTranscript& debate,
                                    int top_n, const Stopwords& stopwords, int window) {
  validate_model(model);
  if (top_n < 2) throw DataError("coherence needs at least 2 top words per topic");
  if (window < 1) throw DataError("coherence window must be positive");

  Stream st = make_stream(debate, Group::All, model.word_index, stopwords);
  const int T = static_cast<int>(st.sents.size());
  if (T == 0) throw DataError("debate \"" + debate.id + "\": no usable tokens for coherence");
  const int W = std::min(window, T);
  const int nwin = T - W + 1;

  // top words per topic, ties resolved toward the smaller word index
  std::vector<std::vector<int>> top_words(model.K);
  std::set<int> needed;
  for (int z = 0; z < model.K; ++z) {
    std::vector<int> order(model.vocab.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return model.topic_word[z][a] > model.topic_word[z][b];
    });
    int take = std::min<int>(top_n, static_cast<int>(order.size()));
    top_words[z].assign(order.begin(), order.begin() + take);
    needed.insert(top_words[z].begin(), top_words[z].end());
  }

  // window presence per needed word
  std::map<int, std::vector<char>> presence;
  for (int w : needed) presence[w] = std::vector<char>(nwin, 0);
  std::vector<std::set<int>> in_sent(T);
  for (int t = 0; t < T; ++t)
    for (int w : st.sents[t])
      if (needed.count(w)) in_sent[t].insert(w);
  for (int start = 0; start < nwin; ++start)
    for (int t = start; t < start + W; ++t)
      for (int w : in_sent[t]) presence[w][start] = 1;

  std::vector<double> scores(model.K, 0.0);
  for (int z = 0; z < model.K; ++z) {
    double total = 0.0;
    int pairs = 0;
    const auto& words = top_words[z];
    for (size_t i = 0; i < words.size(); ++i) {
      for (size_t j = i + 1; j < words.size(); ++j) {
        const auto& pi = presence[words[i]];
        const auto& pj = presence[words[j]];
        int ni = 0, nj = 0, nij = 0;
        for (int wdx = 0; wdx < nwin; ++wdx) {
          ni += pi[wdx];
          nj += pj[wdx];
          nij += pi[wdx] & pj[wdx];
        }
        if (ni == 0 || nj == 0) continue;  // pair never observed, skip
        double npmi;
        if (nij == 0) {
          npmi = -1.0;
        } else if (nij == nwin) {
          npmi = 1.0;  // complete co-occurrence
        } else {
          double pij = static_cast<double>(nij) / nwin;
          double ratio = (static_cast<double>(nij) * nwin) / (static_cast<double>(ni) * nj);
          npmi = std::log(ratio) / (-std::log(pij));
          npmi = std::clamp(npmi, -1.0, 1.0);
        }
        total += npmi;
        ++pairs;
      }
    }
    scores[z] = pairs > 0 ? total / pairs : 0.0;
  }
  return scores;
}

TopicCountChoice select_topic_count(const DebateTranscript& debate, int kmin, int kmax,
                                    const HtmmHyper& hyper, uint64_t seed,
                                    const Stopwords& stopwords, int top_n) {
  if (kmin < 1 || kmax < kmin)
    throw DataError("invalid topic count range [" + std::to_string(kmin) + ", " +
                    std::to_string(kmax) + "]");
  TopicCountChoice choice;
  bool have = false;
  double best = 0.0;
  std::string last_error = "no topic count attempted";
  for (int k = kmin; k <= kmax; ++k) {
    FitResult fit;
    double score = 0.0;
    try {
      fit = fit_htmm(debate, k, hyper, seed, stopwords);
      auto per_topic = topic_coherence(fit.model, debate, top_n, stopwords);
      for (double s : per_topic) score += s;
      score /= static_cast<double>(per_topic.size());
    } catch (const DataError& e) {
      last_error = e.what();
      continue;
    }
    choice.scores.emplace_back(k, score);
    if (!have || score > best) {  // strict improvement keeps the smaller K on ties
      have = true;
      best = score;
      choice.K = k;
      choice.fit = std::move(fit);
    }
  }
  if (!have) throw DataError("debate \"" + debate.id + "\": every topic count failed (" +
                             last_error + ")");
  return choice;
}

Stopwords build_stopwords(const Corpus& corpus, int top_n) {
  std::map<std::string, size_t> counts;
  for (const auto& d : corpus.debates)
    for (const auto& t : d.turns)
      for (const auto& s : t.sentences)
        for (const auto& tok : s.tokens) ++counts[lowercase(tok.surface)];
  std::vector<std::pair<std::string, size_t>> order(counts.begin(), counts.end());
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Stopwords out;
  for (size_t i = 0; i < order.size() && static_cast<int>(i) < top_n; ++i)
    out.insert(order[i].first);
  return out;
}

SegmentedCorpus segment_corpus(const Corpus& corpus, const SegmenterConfig& config) {
  SegmentedCorpus out;
  Stopwords stops = build_stopwords(corpus, config.stopword_top_n);
  out.stopwords.assign(stops.begin(), stops.end());
  for (const auto& debate : corpus.debates) {
    // seed tied to the debate id so corpus composition does not reshuffle fits
    uint64_t seed = fnv1a64(debate.id, config.seed * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull);
    TopicCountChoice choice = select_topic_count(debate, config.kmin, config.kmax, config.hyper,
                                                 seed, stops, config.coherence_top_n);
    FitResult refit = side_conditioned_refit(choice.fit.model, debate, config.hyper, stops);
    SegmentedDebate seg;
    seg.debate_id = debate.id;
    seg.K = choice.K;
    seg.model = std::move(refit.model);
    seg.labels = assign_topics(seg.model, debate, stops);
    seg.arguments = chunk_arguments(seg.labels, debate);
    for (const auto& [k, score] : choice.scores)
      if (k == choice.K) seg.mean_coherence = score;
    out.debates.push_back(std::move(seg));
  }
  return out;
}

}  // namespace meritum
