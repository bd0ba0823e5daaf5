#include "hglc/equiv.hpp"

#include <algorithm>
#include <chrono>
#include <json.hpp>
#include <map>
#include <set>
#include <thread>

#include "hglc/text.hpp"

namespace hglc {

namespace {

struct Sized {
  NLMFormulaPtr f;
  int depth;
};

int db_size(const DatabasePtr& db) {
  return db->connective_count() + db->bracket_count();
}

// mu maps B\cA and A/cB to the same formula for commutative c, so the
// recognized preimage can only be compared modulo that identification.
NLMFormulaPtr canon_formula(const NLMFormulaPtr& f, const Signature& sig) {
  switch (f->kind()) {
    case NLMKind::atom:
      return f;
    case NLMKind::prod:
      return NLMFormula::prod(f->index(), canon_formula(f->left(), sig),
                              canon_formula(f->right(), sig));
    case NLMKind::under: {
      auto b = canon_formula(f->left(), sig);
      auto a = canon_formula(f->right(), sig);
      if (sig.is_commutative(f->index()))
        return NLMFormula::over(f->index(), a, b);
      return NLMFormula::under(f->index(), b, a);
    }
    case NLMKind::over:
      return NLMFormula::over(f->index(), canon_formula(f->left(), sig),
                              canon_formula(f->right(), sig));
    case NLMKind::dia:
      return NLMFormula::dia(f->index(), canon_formula(f->arg(), sig));
    case NLMKind::box:
      return NLMFormula::box(f->index(), canon_formula(f->arg(), sig));
  }
  return f;
}

DatabasePtr canon_db(const DatabasePtr& d, const Signature& sig) {
  switch (d->kind()) {
    case DBKind::leaf:
      return Database::leaf(canon_formula(d->formula(), sig));
    case DBKind::pair:
      return Database::pair(d->index(), canon_db(d->left(), sig),
                            canon_db(d->right(), sig));
    case DBKind::angle:
      return Database::angle(d->index(), canon_db(d->child(), sig));
  }
  return d;
}

}  // namespace

std::vector<NLMFormulaPtr> enumerate_formulas(const EnumerationSpec& spec) {
  spec.sig.validate();
  int cap = spec.max_total_connectives;
  std::vector<Sized> all;
  std::set<std::string> seen;
  auto add = [&](const NLMFormulaPtr& f, int depth) {
    if (depth > spec.max_formula_depth) return;
    if (f->connective_count() > cap) return;
    if (seen.insert(f->key()).second) all.push_back({f, depth});
  };
  for (const auto& a : spec.atoms) add(NLMFormula::atom(a), 0);
  for (int layer = 0; layer < spec.max_formula_depth; ++layer) {
    size_t n = all.size();
    for (size_t i = 0; i < n; ++i) {
      for (size_t k = 0; k < n; ++k) {
        // copy out: add() may grow `all` and invalidate references
        Sized l = all[i];
        Sized r = all[k];
        if (1 + l.f->connective_count() + r.f->connective_count() > cap)
          continue;
        int d = 1 + std::max(l.depth, r.depth);
        for (const std::string& m : spec.sig.modes) {
          add(NLMFormula::prod(m, l.f, r.f), d);
          add(NLMFormula::under(m, l.f, r.f), d);
          add(NLMFormula::over(m, l.f, r.f), d);
        }
      }
      Sized u = all[i];
      for (const std::string& j : spec.sig.modalities) {
        add(NLMFormula::dia(j, u.f), u.depth + 1);
        add(NLMFormula::box(j, u.f), u.depth + 1);
      }
    }
  }
  std::sort(all.begin(), all.end(), [](const Sized& a, const Sized& b) {
    int ca = a.f->connective_count(), cb = b.f->connective_count();
    if (ca != cb) return ca < cb;
    return a.f->key() < b.f->key();
  });
  std::vector<NLMFormulaPtr> out;
  out.reserve(all.size());
  for (const Sized& s : all) out.push_back(s.f);
  return out;
}

std::vector<DatabasePtr> enumerate_databases(const EnumerationSpec& spec) {
  int cap = spec.max_total_connectives;
  std::vector<DatabasePtr> all;
  std::set<std::string> seen;
  auto add = [&](const DatabasePtr& d) {
    if (d->leaf_count() > spec.max_database_leaves) return;
    if (db_size(d) > cap) return;
    if (seen.insert(d->key()).second) all.push_back(d);
  };
  for (const NLMFormulaPtr& f : enumerate_formulas(spec))
    add(Database::leaf(f));
  for (bool grew = true; grew;) {
    grew = false;
    size_t n = all.size();
    for (size_t i = 0; i < n; ++i) {
      DatabasePtr di = all[i];  // add() may grow `all`
      for (const std::string& j : spec.sig.modalities) {
        size_t before = all.size();
        add(Database::angle(j, di));
        grew = grew || all.size() != before;
      }
      for (size_t k = 0; k < n; ++k) {
        DatabasePtr dk = all[k];
        if (di->leaf_count() + dk->leaf_count() > spec.max_database_leaves)
          continue;
        if (1 + db_size(di) + db_size(dk) > cap) continue;
        for (const std::string& m : spec.sig.modes) {
          size_t before = all.size();
          add(Database::pair(m, di, dk));
          grew = grew || all.size() != before;
        }
      }
    }
  }
  std::sort(all.begin(), all.end(),
            [](const DatabasePtr& a, const DatabasePtr& b) {
              if (a->leaf_count() != b->leaf_count())
                return a->leaf_count() < b->leaf_count();
              if (db_size(a) != db_size(b)) return db_size(a) < db_size(b);
              return a->key() < b->key();
            });
  return all;
}

EquivReport run_equivalence(const EnumerationSpec& spec, int workers) {
  auto t0 = std::chrono::steady_clock::now();
  spec.sig.validate();
  classify(spec.sig);  // rejects |associative| > 1 up front
  if (workers < 1) workers = 1;

  EquivReport rep;
  std::vector<NLMFormulaPtr> formulas = enumerate_formulas(spec);
  std::vector<DatabasePtr> dbs = enumerate_databases(spec);
  rep.formulas = static_cast<std::int64_t>(formulas.size());
  rep.databases = static_cast<std::int64_t>(dbs.size());

  struct FInfo {
    FormulaPtr image;
    int conn;
    bool atom;
  };
  std::vector<FInfo> fi;
  fi.reserve(formulas.size());
  for (const NLMFormulaPtr& f : formulas) {
    FInfo info{mu(f, spec.sig), f->connective_count(),
               f->kind() == NLMKind::atom};
    auto back = mu_inverse(info.image, spec.sig);
    if (back) {
      ++rep.roundtrips;
    } else {
      rep.roundtrip_failures.push_back(
          {format_nlm_formula(f), "", "", "mu image not recognized"});
    }
    fi.push_back(std::move(info));
  }
  struct DInfo {
    Hypergraph graph;
    int size;
  };
  std::vector<DInfo> di;
  di.reserve(dbs.size());
  for (const DatabasePtr& d : dbs) {
    DInfo info{htree(d, spec.sig), db_size(d)};
    auto back = htree_inverse(info.graph, spec.sig);
    if (back &&
        same_database(
            class_representative(canon_db(*back, spec.sig), spec.sig),
            class_representative(canon_db(d, spec.sig), spec.sig))) {
      ++rep.roundtrips;
    } else {
      rep.roundtrip_failures.push_back(
          {format_database(d), "", "",
           back ? "recognized outside the structural class"
                : "htree image not recognized"});
    }
    di.push_back(std::move(info));
  }

  std::vector<std::pair<int, int>> jobs;
  for (size_t d = 0; d < dbs.size(); ++d)
    for (size_t f = 0; f < formulas.size(); ++f)
      if (di[d].size + fi[f].conn <= spec.max_total_connectives)
        jobs.push_back({static_cast<int>(d), static_cast<int>(f)});
  rep.total = static_cast<std::int64_t>(jobs.size());

  // one slot per job; workers write disjoint slots
  struct JobOut {
    std::int8_t nlm = -1;
    std::int8_t hl = -1;
    std::int8_t lemma1 = -1;  // HLProver::Lemma1, or -1 when not atomic
  };
  std::vector<JobOut> outs(jobs.size());

  auto verdict_index = [](Verdict v) {
    return static_cast<std::int8_t>(v);
  };
  auto run_worker = [&](int w) {
    NLMProver np(spec.sig);
    HLProver hp;
    for (size_t k = static_cast<size_t>(w); k < jobs.size();
         k += static_cast<size_t>(workers)) {
      auto [d, f] = jobs[k];
      NLMSequent s{dbs[d], formulas[f]};
      Verdict vn = np.prove(s, spec.budget).verdict;
      if (vn == Verdict::exhausted)
        vn = np.prove(s, spec.budget * 4).verdict;
      HLSequent hs(di[d].graph, fi[f].image);
      Verdict vh = hp.prove(hs, spec.budget).verdict;
      if (vh == Verdict::exhausted)
        vh = hp.prove(hs, spec.budget * 4).verdict;
      outs[k].nlm = verdict_index(vn);
      outs[k].hl = verdict_index(vh);
      if (fi[f].atom)
        outs[k].lemma1 = static_cast<std::int8_t>(
            hp.lemma1_check(di[d].graph, fi[f].image, spec.budget));
    }
  };
  if (workers == 1) {
    run_worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_worker, w);
    for (auto& t : pool) t.join();
  }

  for (size_t k = 0; k < jobs.size(); ++k) {
    auto [d, f] = jobs[k];
    Verdict vn = static_cast<Verdict>(outs[k].nlm);
    Verdict vh = static_cast<Verdict>(outs[k].hl);
    ++rep.verdict_counts[outs[k].nlm][outs[k].hl];
    std::string text;
    auto sequent_text = [&]() -> const std::string& {
      if (text.empty())
        text = format_nlm_sequent(NLMSequent{dbs[d], formulas[f]});
      return text;
    };
    if (vn == Verdict::derivable && vh == Verdict::derivable)
      ++rep.derivable_both;
    else if (vn == Verdict::underivable && vh == Verdict::underivable)
      ++rep.underivable_both;
    else if (vn == Verdict::exhausted || vh == Verdict::exhausted)
      rep.exhausted_cases.push_back(
          {sequent_text(), verdict_name(vn), verdict_name(vh), ""});
    else
      rep.disagreements.push_back(
          {sequent_text(), verdict_name(vn), verdict_name(vh), ""});
    if (outs[k].lemma1 >= 0) {
      auto l1 = static_cast<HLProver::Lemma1>(outs[k].lemma1);
      switch (l1) {
        case HLProver::Lemma1::holds:
          if (vh == Verdict::derivable)
            ++rep.lemma1_holds;
          else
            ++rep.lemma1_vacuous;
          break;
        case HLProver::Lemma1::inapplicable:
          ++rep.lemma1_inapplicable;
          break;
        case HLProver::Lemma1::fails:
          rep.lemma1_failures.push_back({sequent_text(), verdict_name(vn),
                                         verdict_name(vh),
                                         "derivable but not a handle"});
          break;
        case HLProver::Lemma1::exhausted:
          rep.lemma1_failures.push_back({sequent_text(), verdict_name(vn),
                                         verdict_name(vh),
                                         "lemma oracle exhausted"});
          break;
      }
    }
  }

  rep.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

std::string report_to_json(const EquivReport& rep) {
  nlohmann::json j;
  j["total"] = rep.total;
  j["formulas"] = rep.formulas;
  j["databases"] = rep.databases;
  j["derivable_both"] = rep.derivable_both;
  j["underivable_both"] = rep.underivable_both;
  j["roundtrips"] = rep.roundtrips;
  j["lemma1"] = {{"holds", rep.lemma1_holds},
                 {"vacuous", rep.lemma1_vacuous},
                 {"inapplicable", rep.lemma1_inapplicable}};
  nlohmann::json matrix = nlohmann::json::object();
  const char* names[3] = {"derivable", "underivable", "exhausted"};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (rep.verdict_counts[a][b] != 0)
        matrix[std::string("nlm_") + names[a] + "/hl_" + names[b]] =
            rep.verdict_counts[a][b];
  j["verdicts"] = matrix;
  auto records = [](const std::vector<EquivRecord>& rs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const EquivRecord& r : rs) {
      nlohmann::json e;
      e["sequent"] = r.sequent;
      if (!r.nlm.empty()) e["nlm"] = r.nlm;
      if (!r.hl.empty()) e["hl"] = r.hl;
      if (!r.note.empty()) e["note"] = r.note;
      arr.push_back(e);
    }
    return arr;
  };
  j["disagreements"] = records(rep.disagreements);
  j["exhausted_cases"] = records(rep.exhausted_cases);
  j["roundtrip_failures"] = records(rep.roundtrip_failures);
  j["lemma1_failures"] = records(rep.lemma1_failures);
  j["ok"] = rep.ok();
  j["seconds"] = rep.seconds;
  return j.dump(2);
}

}  // namespace hglc
