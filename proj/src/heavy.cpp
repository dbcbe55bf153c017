#include "dsp/heavy.hpp"

#include <algorithm>
#include <cmath>

namespace dsp {

namespace {

std::uint64_t pair_key(Vertex v, int slot) {
	return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v)) << 32) | static_cast<std::uint32_t>(slot);
}

std::vector<char> mask_of(int bound, const std::vector<Vertex>& vs) {
	std::vector<char> m(bound, 0);
	for (Vertex v : vs) m[v] = 1;
	return m;
}

// s..x from the tree, returned as x..(vertex after s).
std::vector<Vertex> tree_path_to_source(const EsTree& t, Vertex x) {
	auto p = t.path(x);
	std::vector<Vertex> out(p->rbegin(), p->rend());
	out.pop_back();
	return out;
}

}  // namespace

double heavy_query_bound(int component_size, double tau, double base, const Params& p) {
	return 8192.0 * component_size / tau * base * p.ell_star * std::pow(p.lg, 4);
}

HeavyGraph::HeavyGraph(const DynamicGraph& g, double tau, const Params& p, HeavyOptions opt)
    : g_(g), tau_(tau), p_(p), opt_(opt), rng_(opt.seed) {
	base_ = opt_.base > 0 ? opt_.base : p_.Delta;
	if (base_ <= 1) throw ContractViolation("heavy graph: layer base must exceed 1");
	if (tau_ <= 0) throw ContractViolation("heavy graph: tau must be positive");
	n_ = g_.id_bound();
	hop_ = p_.hop_bound();
	int maxdeg = 0;
	for (Vertex v : g_.vertices()) {
		if (g_.degree(v) < tau_)
			throw ContractViolation("heavy graph: vertex " + std::to_string(v) + " has degree below tau");
		maxdeg = std::max(maxdeg, g_.degree(v));
	}
	// z1: smallest with maxdeg < base^z1; z2: largest with base^z2 < tau/(64 lg).
	z1_ = 0;
	while (std::pow(base_, z1_) <= maxdeg) ++z1_;
	while (std::pow(base_, z1_ - 1) > maxdeg) --z1_;
	const double low = tau_ / (64 * std::max(p_.lg, 1.0));
	z2_ = 0;
	while (std::pow(base_, z2_) >= low) --z2_;
	while (std::pow(base_, z2_ + 1) < low) ++z2_;
	r_ = std::max(1, z1_ - z2_);
	z2_ = z1_ - r_;

	layers_.resize(r_ + 1);
	N_.assign(r_ + 1, 0);
	touch_.resize(r_ + 1);
	layer_.assign(n_, 1);
	core_.assign(n_, -1);
	disc_.assign(n_, 0);
	esc_.assign(n_, 0);
	hosts_.assign(n_, {});
	forest_ = make_hdt_forest(g_);
	construct_layers(1);
	total_rebuilds_ = 0;
}

double HeavyGraph::h(int j) const { return std::pow(base_, z1_ - j); }

void HeavyGraph::construct_layers(int j) {
	if (j < 1 || j > r_) throw ContractViolation("construct_layers: layer index out of range");
	++total_rebuilds_;
	std::vector<Vertex> lam;
	for (Vertex v : g_.vertices())
		if (layer_[v] > j || (layer_[v] == j && !disc_[v])) lam.push_back(v);
	for (Vertex v : lam) core_[v] = -1;
	for (int jj = j; jj <= r_; ++jj) {
		for (int c : layers_[jj].cores) cores_[c].reset();
		layers_[jj].cores.clear();
		layers_[jj].tilde.clear();
		if (jj > j) layers_[jj].discarded.clear();
	}
	auto& dj = layers_[j].discarded;
	std::erase_if(dj, [&](Vertex v) { return !g_.alive(v); });
	if (j > 1) {
		// Deletions may have left vertices of the layer graph with few neighbours inside it.
		PruneResult pr = degree_prune(g_, lam, h(r_));
		for (Vertex v : pr.removed) {
			disc_[v] = 1;
			dj.push_back(v);
		}
		std::sort(dj.begin(), dj.end());
		lam = pr.kept;
	}
	for (int jj = j; jj <= r_; ++jj) {
		HeavyLayer& L = layers_[jj];
		L.h = h(jj);
		std::vector<Vertex> rest;
		if (jj == r_) {
			L.tilde = lam;
		} else {
			PruneResult pr = degree_prune(g_, lam, L.h);
			L.tilde = pr.kept;
			rest = pr.removed;
			std::sort(rest.begin(), rest.end());
		}
		for (Vertex v : L.tilde) {
			layer_[v] = jj;
			disc_[v] = 0;
		}
		L.iterations = 0;
		L.complete = true;
		if (!L.tilde.empty()) {
			DynamicGraph sub = restrict_graph(g_, mask_of(n_, L.tilde));
			CoreDecomposition d = core_decomposition(sub, L.h, p_, rng_);
			L.iterations = d.iterations;
			L.complete = d.complete;
			for (auto& ks : d.cores) {
				int idx = static_cast<int>(cores_.size());
				int members = static_cast<int>(ks.K.size());
				for (Vertex v : ks.K) core_[v] = idx;
				auto hc = std::make_unique<HeavyCore>(
				    HeavyCore{jj, static_cast<int>(L.cores.size()),
				              CoreMaintainer(std::move(ks), L.h / base_, p_.core_radius), members});
				cores_.push_back(std::move(hc));
				L.cores.push_back(idx);
			}
		}
		++L.builds;
		if (jj < r_) {
			PruneResult pr = degree_prune(g_, rest, h(r_));
			auto& next = layers_[jj + 1].discarded;
			next = pr.removed;
			std::sort(next.begin(), next.end());
			for (Vertex v : next) {
				layer_[v] = jj + 1;
				disc_[v] = 1;
			}
			lam = pr.kept;
		}
	}
	for (auto& hs : hosts_) std::erase_if(hs, [&](int c) { return !cores_[c]; });
	for (int jj = j; jj <= r_; ++jj)
		for (int c : layers_[jj].cores)
			for (Vertex v : cores_[c]->core.core().host.vertices()) hosts_[v].push_back(c);
	for (int jj = j; jj <= r_; ++jj) {
		build_contracted(jj);
		build_escape(jj);
		N_[jj] = 0;
	}
}

void HeavyGraph::build_contracted(int j) {
	HeavyLayer& L = layers_[j];
	const int zc = static_cast<int>(L.cores.size());
	const Vertex s = n_ + zc;
	DynamicGraph H(n_ + zc + 1);
	auto& touch = touch_[j];
	touch.clear();
	for (Vertex v : L.tilde) {
		if (core_[v] >= 0) continue;
		for (const Adj& a : g_.adj(v)) {
			Vertex w = a.to;
			if (layer_[w] != j || disc_[w]) continue;
			if (core_[w] < 0) {
				if (v < w) H.add_edge(v, w, 1);
			} else {
				int slot = cores_[core_[w]]->slot;
				if (++touch[pair_key(v, slot)] == 1) H.add_edge(v, n_ + slot, 1);
			}
		}
	}
	for (int y = 0; y < zc; ++y) H.add_edge(s, n_ + y, 1);
	L.contracted = std::make_unique<EsTree>(H, s, hop_ + 1);
}

void HeavyGraph::build_escape(int j) {
	HeavyLayer& L = layers_[j];
	const Vertex s = n_;
	DynamicGraph H(n_ + 1);
	for (Vertex v : L.discarded) {
		esc_[v] = 0;
		for (const Adj& a : g_.adj(v)) {
			Vertex w = a.to;
			if (layer_[w] < j) ++esc_[v];
			else if (layer_[w] == j && disc_[w] && v < w) H.add_edge(v, w, 1);
		}
		if (esc_[v] > 0) H.add_edge(s, v, 1);
	}
	L.escape = std::make_unique<EsTree>(H, s, hop_);
}

void HeavyGraph::remove_vertex(Vertex u, std::vector<Vertex>& queue, std::vector<char>& queued, HeavyDeletion& out) {
	const int jl = layer_[u];
	std::vector<Vertex> nbrs;
	nbrs.reserve(g_.degree(u));
	for (const Adj& a : g_.adj(u)) {
		nbrs.push_back(a.to);
		out.edges.push_back(a.e);
	}
	HeavyLayer& L = layers_[jl];
	if (disc_[u]) {
		L.escape->delete_vertex(u);
	} else if (core_[u] >= 0) {
		HeavyCore& hc = *cores_[core_[u]];
		for (Vertex w : nbrs) {
			if (layer_[w] != jl || disc_[w] || core_[w] >= 0) continue;
			auto it = touch_[jl].find(pair_key(w, hc.slot));
			if (it == touch_[jl].end() || --it->second > 0) continue;
			EdgeId e = L.contracted->graph().find_edge(w, n_ + hc.slot);
			if (e != kNoEdge) L.contracted->delete_edge(e);
		}
		if (--hc.live_members == 0) L.contracted->delete_vertex(n_ + hc.slot);
	} else {
		L.contracted->delete_vertex(u);
	}
	for (Vertex w : nbrs) {
		if (!disc_[w] || layer_[w] <= jl) continue;
		if (--esc_[w] > 0) continue;
		EsTree& t = *layers_[layer_[w]].escape;
		EdgeId e = t.graph().find_edge(n_, w);
		if (e != kNoEdge) t.delete_edge(e);
	}
	for (int c : hosts_[u])
		if (cores_[c]) cores_[c]->core.delete_vertex(u);
	forest_->delete_vertex(u);
	g_.delete_vertex(u);
	out.evicted.push_back(u);
	for (int j = 1; j <= r_; ++j) ++N_[j];
	for (Vertex w : nbrs)
		if (!queued[w] && g_.degree(w) < tau_) {
			queued[w] = 1;
			queue.push_back(w);
		}
}

HeavyDeletion HeavyGraph::delete_vertex(Vertex v) {
	g_.check_vertex(v);
	HeavyDeletion out;
	std::vector<char> queued(n_, 0);
	std::vector<Vertex> queue{v};
	queued[v] = 1;
	for (size_t i = 0; i < queue.size(); ++i) remove_vertex(queue[i], queue, queued, out);
	for (int j = 1; j <= r_; ++j)
		if (N_[j] >= h(j) / base_) {
			construct_layers(j);
			out.rebuilt_layer = j;
			break;
		}
	return out;
}

bool HeavyGraph::label_universal(Vertex x, Label& out) const {
	const int j = layer_[x];
	const EsTree& t = *layers_[j].contracted;
	if (!t.in_tree(x)) return false;
	std::vector<Vertex> p = tree_path_to_source(t, x);  // x .. z(K)
	const int slot = p.back() - n_;
	p.pop_back();
	const int c = layers_[j].cores[slot];
	Vertex entry = kNoVertex;
	for (const Adj& a : g_.adj(p.back()))
		if (core_[a.to] == c) {
			entry = a.to;
			break;
		}
	if (entry == kNoVertex) return false;
	p.push_back(entry);
	out.core = c;
	out.path.insert(out.path.end(), p.begin() + (out.path.empty() ? 0 : 1), p.end());
	return true;
}

HeavyGraph::Label HeavyGraph::label(Vertex x) const {
	Label out;
	if (core_[x] >= 0) {
		out.core = core_[x];
		out.path = {x};
		out.kind = LabelKind::Core;
		return out;
	}
	if (!disc_[x]) {
		if (label_universal(x, out)) out.kind = LabelKind::Universal;
		else out = Label{};
		return out;
	}
	Vertex cur = x;
	out.path = {x};
	while (true) {
		const int j = layer_[cur];
		const EsTree& t = *layers_[j].escape;
		if (!t.in_tree(cur)) return Label{};
		std::vector<Vertex> p = tree_path_to_source(t, cur);
		out.path.insert(out.path.end(), p.begin() + 1, p.end());
		Vertex w = kNoVertex;
		for (const Adj& a : g_.adj(p.back()))
			if (layer_[a.to] < j) {
				w = a.to;
				break;
			}
		if (w == kNoVertex) return Label{};
		out.path.push_back(w);
		if (core_[w] >= 0) {
			out.core = core_[w];
			break;
		}
		if (!disc_[w]) {
			if (!label_universal(w, out)) return Label{};
			break;
		}
		cur = w;
	}
	out.kind = LabelKind::Discarded;
	return out;
}

std::optional<std::vector<Vertex>> HeavyGraph::try_path(Vertex u, Vertex v, HeavyPathResult& res) {
	std::vector<Vertex> P = forest_->path(u, v);
	res.forest_len = static_cast<int>(P.size()) - 1;
	std::vector<Label> lab(P.size());
	res.unlabeled = 0;
	for (size_t a = 0; a < P.size(); ++a) {
		lab[a] = label(P[a]);
		int hops = static_cast<int>(lab[a].path.size()) - 1;
		if (lab[a].kind == LabelKind::None) ++res.unlabeled;
		else if (lab[a].kind == LabelKind::Universal) res.max_universal_hops = std::max(res.max_universal_hops, hops);
		else if (lab[a].kind == LabelKind::Discarded) res.max_discarded_hops = std::max(res.max_discarded_hops, hops);
	}
	// Keep every label on at most two consecutive entries.
	std::vector<int> Q;
	std::unordered_map<int, int> first;
	for (int a = 0; a < static_cast<int>(P.size()); ++a) {
		const int k = lab[a].core;
		if (k >= 0) {
			auto it = first.find(k);
			if (it == first.end()) {
				first[k] = static_cast<int>(Q.size());
			} else if (it->second != static_cast<int>(Q.size()) - 1) {
				const int b = it->second;
				while (static_cast<int>(Q.size()) > b + 1) {
					const int pos = static_cast<int>(Q.size()) - 1;
					const int k2 = lab[Q.back()].core;
					auto jt = first.find(k2);
					if (k2 >= 0 && jt != first.end() && jt->second == pos) first.erase(jt);
					Q.pop_back();
				}
			}
		}
		Q.push_back(a);
	}
	res.sequence_len = static_cast<int>(Q.size());
	std::vector<Vertex> walk{P[Q[0]]};
	for (size_t i = 0; i + 1 < Q.size(); ++i) {
		const Label& la = lab[Q[i]];
		const Label& lb = lab[Q[i + 1]];
		Vertex x = P[Q[i]], y = P[Q[i + 1]];
		if (g_.find_edge(x, y) != kNoEdge) {
			walk.push_back(y);
			continue;
		}
		if (la.core < 0 || la.core != lb.core) throw std::logic_error("heavy path: unlinked pair in the label sequence");
		++res.core_calls;
		CorePathResult cr = cores_[la.core]->core.path(la.path.back(), lb.path.back());
		if (cr.status != CorePathStatus::Found) return std::nullopt;
		walk.insert(walk.end(), la.path.begin() + 1, la.path.end());
		walk.insert(walk.end(), cr.path.begin() + 1, cr.path.end());
		walk.insert(walk.end(), lb.path.rbegin() + 1, lb.path.rend());
	}
	return erase_loops(walk);
}

HeavyPathResult HeavyGraph::path(Vertex u, Vertex v) {
	g_.check_vertex(u);
	g_.check_vertex(v);
	HeavyPathResult res;
	if (!forest_->connected(u, v)) {
		res.connected = false;
		res.component = forest_->component(u);
		std::sort(res.component.begin(), res.component.end());
		return res;
	}
	res.bound = heavy_query_bound(forest_->component_size(u), tau_, base_, p_);
	if (u == v) {
		res.path = {u};
		return res;
	}
	while (true) {
		if (auto walk = try_path(u, v, res)) {
			res.path = std::move(*walk);
			return res;
		}
		if (res.rebuilds >= opt_.max_query_rebuilds) break;
		construct_layers(1);
		++res.rebuilds;
	}
	res.fallback = true;
	res.path = forest_->path(u, v);
	return res;
}

std::optional<std::string> HeavyGraph::check() const {
	auto fail = [](const std::string& s) { return std::optional<std::string>(s); };
	std::vector<int> in_tilde(n_, 0), in_disc(n_, 0);
	for (int j = 1; j <= r_; ++j) {
		const HeavyLayer& L = layers_[j];
		for (Vertex v : L.tilde)
			if (g_.alive(v)) ++in_tilde[v];
		for (Vertex v : L.discarded)
			if (g_.alive(v)) ++in_disc[v];
		if (j == 1 && !L.discarded.empty()) return fail("layer 1 has discarded vertices");
		if (N_[j] >= h(j) / base_) return fail("counter of layer " + std::to_string(j) + " reached its budget");
		std::vector<char> m = mask_of(n_, L.tilde);
		long long edges = 0;
		for (Vertex v : L.tilde) {
			if (!g_.alive(v)) continue;
			int d = 0;
			for (const Adj& a : g_.adj(v)) d += m[a.to];
			edges += d;
			if (d < L.h - N_[j])
				return fail("vertex " + std::to_string(v) + " has degree " + std::to_string(d) + " in layer " +
				            std::to_string(j));
		}
		if (edges / 2 > base_ * n_ * L.h) return fail("layer " + std::to_string(j) + " has too many edges");
		for (int c : L.cores) {
			const HeavyCore& hc = *cores_.at(c);
			if (hc.layer != j) return fail("core " + std::to_string(c) + " filed under the wrong layer");
			int live = 0;
			for (Vertex v : hc.core.core().K)
				if (g_.alive(v)) {
					++live;
					if (core_[v] != c || layer_[v] != j || disc_[v]) return fail("core member bookkeeping");
				}
			if (live != hc.live_members) return fail("live member count of core " + std::to_string(c));
		}
	}
	for (Vertex v : g_.vertices()) {
		if (g_.degree(v) < tau_) return fail("vertex " + std::to_string(v) + " is below tau");
		if (in_tilde[v] + in_disc[v] != 1) return fail("vertex " + std::to_string(v) + " is not in exactly one layer");
		if (static_cast<bool>(in_disc[v]) != static_cast<bool>(disc_[v])) return fail("discarded flag");
		if (!disc_[v]) continue;
		int esc = 0;
		for (const Adj& a : g_.adj(v)) esc += layer_[a.to] < layer_[v];
		if (esc != esc_[v]) return fail("escape count of " + std::to_string(v));
		const EsTree& t = *layers_[layer_[v]].escape;
		if ((t.graph().find_edge(n_, v) != kNoEdge) != (esc > 0)) return fail("source edge of " + std::to_string(v));
	}
	return std::nullopt;
}

}  // namespace dsp
