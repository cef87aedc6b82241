#include "pvscan/hough.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pvscan {

std::uint64_t HoughAccumulator::total_votes() const {
    return std::accumulate(votes.begin(), votes.end(), std::uint64_t{0});
}

HoughAccumulator build_accumulator(const EdgeMap& edges, double rho_step, double theta_step) {
    if (!(rho_step > 0.0) || !(theta_step > 0.0)) {
        throw InvalidArgument("hough steps must be > 0");
    }
    HoughAccumulator acc;
    acc.rho_step = rho_step;
    acc.theta_step = theta_step;
    acc.theta_bins = std::max(1, static_cast<int>(std::llround(M_PI / theta_step)));
    const double diagonal = std::hypot(edges.width, edges.height);
    acc.rho_half = static_cast<int>(std::ceil(diagonal / rho_step));
    acc.rho_bins = 2 * acc.rho_half + 1;
    acc.votes.assign(static_cast<std::size_t>(acc.theta_bins) * acc.rho_bins, 0);

    std::vector<double> cos_t(acc.theta_bins), sin_t(acc.theta_bins);
    for (int t = 0; t < acc.theta_bins; ++t) {
        cos_t[t] = std::cos(acc.theta_at(t));
        sin_t[t] = std::sin(acc.theta_at(t));
    }

    for (int y = 0; y < edges.height; ++y) {
        for (int x = 0; x < edges.width; ++x) {
            if (!edges.at(x, y)) continue;
            for (int t = 0; t < acc.theta_bins; ++t) {
                const double rho = x * cos_t[t] + y * sin_t[t];
                // Nearest bin; exact halves round toward the larger center.
                const int r = static_cast<int>(std::floor(rho / rho_step + 0.5)) + acc.rho_half;
                ++acc.votes[static_cast<std::size_t>(t) * acc.rho_bins + r];
            }
        }
    }
    return acc;
}

std::vector<LineRT> hough_lines(const EdgeMap& edges, double rho_step, double theta_step,
                                int vote_threshold) {
    if (vote_threshold < 1) throw InvalidArgument("vote_threshold must be >= 1");
    const HoughAccumulator acc = build_accumulator(edges, rho_step, theta_step);

    std::vector<LineRT> lines;
    for (int t = 0; t < acc.theta_bins; ++t) {
        for (int r = 0; r < acc.rho_bins; ++r) {
            const std::uint32_t v = acc.at(t, r);
            if (v < static_cast<std::uint32_t>(vote_threshold)) continue;
            bool peak = true;
            for (int dt = -1; dt <= 1 && peak; ++dt) {
                for (int dr = -1; dr <= 1; ++dr) {
                    if (dt == 0 && dr == 0) continue;
                    const int nt = t + dt;
                    const int nr = r + dr;
                    if (nt < 0 || nt >= acc.theta_bins || nr < 0 || nr >= acc.rho_bins) continue;
                    const std::uint32_t nv = acc.at(nt, nr);
                    if (nv > v || (nv == v && std::pair(nt, nr) < std::pair(t, r))) {
                        peak = false;
                        break;
                    }
                }
            }
            if (peak) lines.push_back({acc.rho_at(r), acc.theta_at(t), v});
        }
    }
    std::sort(lines.begin(), lines.end(), [](const LineRT& a, const LineRT& b) {
        if (a.votes != b.votes) return a.votes > b.votes;
        if (a.theta != b.theta) return a.theta < b.theta;
        return a.rho < b.rho;
    });
    return lines;
}

double angular_distance(double theta1, double theta2) {
    const double d = std::abs(theta1 - theta2);
    return std::min(d, M_PI - d);
}

namespace {

bool lines_similar(const LineRT& a, const LineRT& b, double theta_tol, double rho_tol) {
    const double d = std::abs(a.theta - b.theta);
    if (std::min(d, M_PI - d) > theta_tol) return false;
    // When the angular comparison crosses the pi wrap, the second line is
    // the same geometric line with flipped rho sign.
    const double rho_b = (d > M_PI / 2.0) ? -b.rho : b.rho;
    return std::abs(a.rho - rho_b) <= rho_tol;
}

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// One single-linkage pass: clusters of mutually reachable similar lines are
// replaced by their vote-weighted mean computed in the frame of the cluster's
// strongest member.
std::vector<LineRT> group_pass(const std::vector<LineRT>& lines, double theta_tol,
                               double rho_tol) {
    const std::size_t n = lines.size();
    DisjointSet ds(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (lines_similar(lines[i], lines[j], theta_tol, rho_tol)) {
                ds.unite(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }

    std::vector<std::vector<std::size_t>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[ds.find(static_cast<int>(i))].push_back(i);

    std::vector<LineRT> out;
    for (const auto& members : clusters) {
        if (members.empty()) continue;
        if (members.size() == 1) {
            out.push_back(lines[members[0]]);
            continue;
        }
        std::size_t ref = members[0];
        for (std::size_t m : members) {
            if (lines[m].votes > lines[ref].votes) ref = m;
        }
        const double theta_ref = lines[ref].theta;
        double rho_sum = 0.0, theta_sum = 0.0;
        std::uint64_t vote_sum = 0;
        for (std::size_t m : members) {
            double theta = lines[m].theta;
            double rho = lines[m].rho;
            if (std::abs(theta - theta_ref) > M_PI / 2.0) {
                theta += (theta < theta_ref) ? M_PI : -M_PI;
                rho = -rho;
            }
            const double w = lines[m].votes;
            rho_sum += w * rho;
            theta_sum += w * theta;
            vote_sum += lines[m].votes;
        }
        double rho = rho_sum / static_cast<double>(vote_sum);
        double theta = theta_sum / static_cast<double>(vote_sum);
        if (theta < 0.0) {
            theta += M_PI;
            rho = -rho;
        } else if (theta >= M_PI) {
            theta -= M_PI;
            rho = -rho;
        }
        out.push_back({rho, theta, static_cast<std::uint32_t>(vote_sum)});
    }
    return out;
}

}  // namespace

std::vector<LineRT> group_lines(const std::vector<LineRT>& lines, double theta_tol,
                                double rho_tol) {
    if (!(theta_tol > 0.0) || !(rho_tol > 0.0)) {
        throw InvalidArgument("grouping tolerances must be > 0");
    }
    std::vector<LineRT> current = lines;
    while (true) {
        std::vector<LineRT> next = group_pass(current, theta_tol, rho_tol);
        if (next.size() == current.size()) {
            current = std::move(next);
            break;
        }
        current = std::move(next);
    }
    std::sort(current.begin(), current.end(), [](const LineRT& a, const LineRT& b) {
        if (a.votes != b.votes) return a.votes > b.votes;
        if (a.theta != b.theta) return a.theta < b.theta;
        return a.rho < b.rho;
    });
    return current;
}

std::optional<Point2d> line_intersection(const LineRT& a, const LineRT& b) {
    const double ca = std::cos(a.theta), sa = std::sin(a.theta);
    const double cb = std::cos(b.theta), sb = std::sin(b.theta);
    const double det = ca * sb - sa * cb;  // == sin(theta_b - theta_a)
    if (std::abs(det) < 1e-9) return std::nullopt;
    return Point2d{(a.rho * sb - b.rho * sa) / det, (ca * b.rho - cb * a.rho) / det};
}

GridModel fit_grid(const std::vector<LineRT>& lines, double split_angle, int img_width,
                   int img_height) {
    GridModel grid;
    for (const LineRT& line : lines) {
        const double da = angular_distance(line.theta, 0.0);
        const double db = angular_distance(line.theta, M_PI / 2.0);
        if (da <= split_angle && (da <= db || db > split_angle)) {
            grid.family_a.push_back(line);
        } else if (db <= split_angle) {
            grid.family_b.push_back(line);
        }
    }

    // Near-vertical lines close to theta == pi describe the same geometry as
    // (-rho, theta - pi); sort family A in that unwrapped frame so rho runs
    // left to right.
    const auto canonical_rho_a = [](const LineRT& l) {
        return l.theta > M_PI / 2.0 ? -l.rho : l.rho;
    };
    std::sort(grid.family_a.begin(), grid.family_a.end(),
              [&](const LineRT& a, const LineRT& b) {
                  return canonical_rho_a(a) < canonical_rho_a(b);
              });
    std::sort(grid.family_b.begin(), grid.family_b.end(),
              [](const LineRT& a, const LineRT& b) { return a.rho < b.rho; });

    const double margin_x = 0.1 * img_width;
    const double margin_y = 0.1 * img_height;
    for (const LineRT& a : grid.family_a) {
        for (const LineRT& b : grid.family_b) {
            const auto pt = line_intersection(a, b);
            if (!pt) continue;
            if (pt->x >= -margin_x && pt->x <= (img_width - 1) + margin_x &&
                pt->y >= -margin_y && pt->y <= (img_height - 1) + margin_y) {
                grid.corners.push_back(*pt);
            }
        }
    }

    for (std::size_t j = 0; j + 1 < grid.family_b.size(); ++j) {
        for (std::size_t i = 0; i + 1 < grid.family_a.size(); ++i) {
            const auto tl = line_intersection(grid.family_a[i], grid.family_b[j]);
            const auto tr = line_intersection(grid.family_a[i + 1], grid.family_b[j]);
            const auto br = line_intersection(grid.family_a[i + 1], grid.family_b[j + 1]);
            const auto bl = line_intersection(grid.family_a[i], grid.family_b[j + 1]);
            if (!tl || !tr || !br || !bl) continue;
            grid.panels.push_back(PanelQuad{{*tl, *tr, *br, *bl}});
        }
    }
    return grid;
}

std::size_t select_prominent_panel_index(const GridModel& grid, const GrayImage& img) {
    if (grid.panels.empty()) throw NoPanels("grid contains no panels");

    const auto fully_inside = [&](const PanelQuad& q) {
        for (const Point2d& c : q.corners) {
            if (c.x < 0.0 || c.x > img.width - 1 || c.y < 0.0 || c.y > img.height - 1) {
                return false;
            }
        }
        return true;
    };

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < grid.panels.size(); ++i) {
        if (fully_inside(grid.panels[i])) candidates.push_back(i);
    }
    const bool use_area = !candidates.empty();
    if (candidates.empty()) {
        candidates.resize(grid.panels.size());
        std::iota(candidates.begin(), candidates.end(), 0);
    }

    const Point2d center{(img.width - 1) / 2.0, (img.height - 1) / 2.0};
    std::size_t best = candidates[0];
    double best_area = quad_area(grid.panels[best]);
    double best_dist = distance(quad_centroid(grid.panels[best]), center);
    for (std::size_t k = 1; k < candidates.size(); ++k) {
        const std::size_t i = candidates[k];
        const double area = quad_area(grid.panels[i]);
        const double dist = distance(quad_centroid(grid.panels[i]), center);
        const double scale = std::max({best_area, area, 1.0});
        const bool area_tie = std::abs(area - best_area) <= 1e-6 * scale;
        bool better;
        if (use_area && !area_tie) {
            better = area > best_area;
        } else {
            better = dist < best_dist;
        }
        if (better) {
            best = i;
            best_area = area;
            best_dist = dist;
        }
    }
    return best;
}

PanelQuad select_prominent_panel(const GridModel& grid, const GrayImage& img) {
    return grid.panels[select_prominent_panel_index(grid, img)];
}

}  // namespace pvscan
