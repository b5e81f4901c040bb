#include "meritum/arguments.hpp"

namespace meritum {

std::vector<Argument> chunk_arguments(const std::vector<std::vector<int>>& labels,
                                      const DebateTranscript& debate) {
  if (labels.size() != debate.turns.size())
    throw DataError("debate \"" + debate.id + "\": label shape does not match turns");
  for (size_t t = 0; t < labels.size(); ++t)
    if (labels[t].size() != debate.turns[t].sentences.size())
      throw DataError("debate \"" + debate.id + "\": label shape does not match sentences of turn " +
                      std::to_string(t));

  std::vector<Argument> args;
  int ordinal = 0;
  for (size_t t = 0; t < debate.turns.size(); ++t) {
    const Turn& turn = debate.turns[t];
    if (turn.side == Side::Moderator) continue;
    const auto& row = labels[t];
    size_t s = 0;
    while (s < row.size()) {
      size_t e = s + 1;
      while (e < row.size() && row[e] == row[s]) ++e;
      Argument a;
      a.turn = static_cast<int>(t);
      a.first_sentence = static_cast<int>(s);
      a.last_sentence = static_cast<int>(e);
      a.topic = row[s];
      a.side = turn.side;
      a.phase = turn.phase;
      a.ordinal = ordinal++;
      args.push_back(a);
      s = e;
    }
  }
  return args;
}

}  // namespace meritum
