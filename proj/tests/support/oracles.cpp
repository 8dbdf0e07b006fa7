#include "oracles.hpp"

#include <limits>
#include <stdexcept>

namespace oracle {

double sq_dist(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("oracle::sq_dist: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += (a[i] - b[i]) * (a[i] - b[i]);
  return total;
}

std::vector<std::pair<std::string, double>> knn(const std::map<std::string, Vec>& points, const Vec& query,
                                                std::size_t k, const std::set<std::string>& exclude) {
  std::vector<std::pair<std::string, double>> out;
  std::set<std::string> taken = exclude;
  while (out.size() < k) {
    const std::string* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    // std::map iterates ids ascending, so strict < keeps the smallest id on ties.
    for (const auto& [id, v] : points) {
      if (taken.count(id)) continue;
      const double d = sq_dist(v, query);
      if (best == nullptr || d < best_d) {
        best = &id;
        best_d = d;
      }
    }
    if (best == nullptr) break;
    taken.insert(*best);
    out.emplace_back(*best, best_d);
  }
  return out;
}

double mean_nn5(const std::map<std::string, Vec>& points, const Vec& query, const std::set<std::string>& exclude) {
  const auto nearest = knn(points, query, 5, exclude);
  if (nearest.empty()) throw std::invalid_argument("oracle::mean_nn5: no points");
  double total = 0.0;
  for (const auto& n : nearest) total += n.second;
  return total / static_cast<double>(nearest.size());
}

std::map<std::string, long long> borda_tenths(const std::vector<OrderedBallot>& ballots) {
  std::map<std::string, long long> tenths;
  for (const auto& b : ballots) {
    for (std::size_t pos = 0; pos < b.order.size(); ++pos) {
      // n - rank is exactly the number of ideas ranked below.
      const auto below = static_cast<long long>(b.order.size() - 1 - pos);
      tenths[b.order[pos]] += below * b.confidence.at(b.order[pos]);
    }
  }
  return tenths;
}

std::map<std::string, double> borda(const std::vector<OrderedBallot>& ballots) {
  std::map<std::string, double> scores;
  for (const auto& [id, t] : borda_tenths(ballots)) scores[id] = static_cast<double>(t) / 10.0;
  return scores;
}

std::string classical_borda_winner(const std::vector<OrderedBallot>& ballots) {
  std::map<std::string, long> points;
  for (const auto& b : ballots) {
    for (std::size_t pos = 0; pos < b.order.size(); ++pos) {
      points[b.order[pos]] += static_cast<long>(b.order.size() - pos);
    }
  }
  std::string winner;
  long best = -1;
  for (const auto& [id, p] : points) {
    if (p > best) {
      best = p;
      winner = id;
    }
  }
  return winner;
}

double mean(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total / static_cast<double>(values.size());
}

}  // namespace oracle
