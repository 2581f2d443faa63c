#include "arena/algorithms.hpp"

#include <algorithm>

namespace arena {

namespace {

// ---------------------------------------------------------------------------

class TrivialCore final : public CollectCore {
public:
    TrivialCore(int n, int pid) : n_(n), self_(pid) {}

    void begin(TaskKind kind, std::int64_t payload, std::any meta) override {
        kind_ = kind;
        payload_ = payload;
        meta_ = std::move(meta);
        wrote_ = false;
        reads_ = 0;
        result_.assign(static_cast<std::size_t>(n_), nullptr);
    }

    OpIntent next_op(long) override {
        if (!wrote_) {
            if (kind_ == TaskKind::WriteCollect)
                return OpIntent::write_value(self_, payload_, meta_, {});
            return OpIntent::write(self_, {});
        }
        int target = (self_ + 1 + reads_) % n_;
        return OpIntent::read(target);
    }

    std::optional<CollectOutcome> absorb(const ExecutedOp& op) override {
        if (op.kind == OpKind::Write) {
            wrote_ = true;
            result_[static_cast<std::size_t>(self_)] = op.cell->value;
        } else {
            result_[static_cast<std::size_t>(op.reg)] =
                op.cell ? op.cell->value : nullptr;
            ++reads_;
        }
        if (wrote_ && reads_ == n_ - 1) return CollectOutcome{result_};
        return std::nullopt;
    }

private:
    int n_;
    int self_;
    TaskKind kind_ = TaskKind::Collect;
    std::int64_t payload_ = 0;
    std::any meta_;
    bool wrote_ = false;
    int reads_ = 0;
    std::vector<ValuePtr> result_;
};

// ---------------------------------------------------------------------------

class CoopCore final : public CollectCore {
public:
    CoopCore(int n, int pid) : n_(n), self_(pid) {
        knowledge_.assign(static_cast<std::size_t>(n_), 0);
        view_.resize(static_cast<std::size_t>(n_));
    }

    void begin(TaskKind kind, std::int64_t payload, std::any meta) override {
        kind_ = kind;
        payload_ = payload;
        meta_ = std::move(meta);
        wrote_ = false;
        steps_ = 0;
        certified_.assign(static_cast<std::size_t>(n_), 0);
        result_.assign(static_cast<std::size_t>(n_), nullptr);
        remaining_ = n_;
    }

    OpIntent next_op(long) override {
        if (!wrote_) {
            ++epoch_;
            knowledge_[static_cast<std::size_t>(self_)] = epoch_;
            CoopNote note;
            note.epoch = epoch_;
            note.knowledge = knowledge_;
            note.view = view_;
            if (kind_ == TaskKind::WriteCollect)
                return OpIntent::write_value(self_, payload_, meta_,
                                             std::move(note));
            return OpIntent::write(self_, std::move(note));
        }
        // next uncertified register, cyclic from self+1
        for (int k = 1; k < n_; ++k) {
            int r = (self_ + k) % n_;
            if (!certified_[static_cast<std::size_t>(r)])
                return OpIntent::read(r);
        }
        throw std::logic_error("coop: no pending register mid-collect");
    }

    std::optional<CollectOutcome> absorb(const ExecutedOp& op) override {
        ++steps_;
        if (steps_ > 2 * static_cast<long>(n_))
            throw std::logic_error("coop: collect exceeded 2n steps");
        if (op.kind == OpKind::Write) {
            wrote_ = true;
            certify(self_, op.cell->value);
            return done_check();
        }
        const int q = op.reg;
        const Cell* cell = op.cell.get();
        const CoopNote* note =
            cell ? std::any_cast<CoopNote>(&cell->note) : nullptr;
        if (note) {
            for (int i = 0; i < n_; ++i)
                knowledge_[static_cast<std::size_t>(i)] =
                    std::max(knowledge_[static_cast<std::size_t>(i)],
                             note->knowledge[static_cast<std::size_t>(i)]);
            knowledge_[static_cast<std::size_t>(cell->writer)] = std::max(
                knowledge_[static_cast<std::size_t>(cell->writer)], note->epoch);
        }
        // direct read: always adoptable
        if (!certified_[static_cast<std::size_t>(q)])
            certify(q, cell ? cell->value : nullptr);
        view_[static_cast<std::size_t>(q)] =
            CoopEntry{cell ? cell->value : nullptr, CoopCert{knowledge_}};
        // gossip: adopt entries whose certificate proves the original read
        // happened after this collect began
        if (note) {
            for (int r = 0; r < n_; ++r) {
                auto ri = static_cast<std::size_t>(r);
                if (r == self_ || certified_[ri]) continue;
                const auto& entry = note->view[ri];
                if (!entry) continue;
                if (entry->cert.observed[static_cast<std::size_t>(self_)] >=
                    epoch_) {
                    certify(r, entry->value);
                    view_[ri] = *entry;
                }
            }
        }
        return done_check();
    }

private:
    void certify(int r, ValuePtr v) {
        auto ri = static_cast<std::size_t>(r);
        certified_[ri] = 1;
        result_[ri] = std::move(v);
        --remaining_;
    }

    std::optional<CollectOutcome> done_check() {
        if (remaining_ == 0) return CollectOutcome{result_};
        return std::nullopt;
    }

    int n_;
    int self_;
    std::int64_t epoch_ = 0;
    std::vector<std::int64_t> knowledge_;
    std::vector<std::optional<CoopEntry>> view_;

    TaskKind kind_ = TaskKind::Collect;
    std::int64_t payload_ = 0;
    std::any meta_;
    bool wrote_ = false;
    long steps_ = 0;
    std::vector<char> certified_;
    std::vector<ValuePtr> result_;
    int remaining_ = 0;
};

// ---------------------------------------------------------------------------

class ChampionCore final : public CollectCore {
public:
    ChampionCore(int n, int pid, std::shared_ptr<const ChampionConfig> cfg)
        : n_(n), self_(pid), cfg_(std::move(cfg)) {
        published_stamps_.assign(static_cast<std::size_t>(n_), 0);
    }

    void begin(TaskKind kind, std::int64_t payload, std::any meta) override {
        kind_ = kind;
        payload_ = payload;
        meta_ = std::move(meta);
        phase_ = Phase::Init;
    }

    OpIntent next_op(long step) override {
        switch (phase_) {
            case Phase::Init: {
                freeze_roles(step);
                ++epoch_;
                ChampNote note;
                note.epoch = epoch_;
                note.has_vector = has_published_;
                note.stamps = published_stamps_;
                note.snapshot = published_snapshot_;
                if (kind_ == TaskKind::WriteCollect)
                    return OpIntent::write_value(self_, payload_, meta_,
                                                 std::move(note));
                return OpIntent::write(self_, std::move(note));
            }
            case Phase::Gather: {
                if (gather_done()) {
                    stamps_ = seen_;
                    phase_ = Phase::Sweep;
                    return next_op(step);
                }
                int target = role_clients_[gather_pos_ % role_clients_.size()];
                ++gather_pos_;
                return OpIntent::read(target);
            }
            case Phase::Sweep: {
                while (sweep_next_ == self_) ++sweep_next_;
                if (sweep_next_ < n_) return OpIntent::read(sweep_next_);
                phase_ = Phase::Publish;
                return next_op(step);
            }
            case Phase::Publish: {
                ChampNote note;
                note.epoch = epoch_;
                note.has_vector = true;
                note.stamps = stamps_;
                values_[static_cast<std::size_t>(self_)] = own_value_;
                note.snapshot = values_;
                return OpIntent::write(self_, std::move(note));
            }
            case Phase::ClientLoop: {
                // alternate helper rechecks with direct reads
                if (my_helper_ >= 0 && reads_ % 2 == 0)
                    return OpIntent::read(my_helper_);
                for (int k = 1; k < n_; ++k) {
                    int r = (self_ + k) % n_;
                    if (!covered_[static_cast<std::size_t>(r)])
                        return OpIntent::read(r);
                }
                throw std::logic_error("champion client: nothing to read");
            }
            case Phase::Idle: break;
        }
        throw std::logic_error("champion: next_op while idle");
    }

    std::optional<CollectOutcome> absorb(const ExecutedOp& op) override {
        const Cell* cell = op.cell.get();
        const ChampNote* note =
            cell ? std::any_cast<ChampNote>(&cell->note) : nullptr;
        switch (phase_) {
            case Phase::Init:
                own_value_ = op.cell->value;
                if (is_helper_) {
                    if (role_clients_.empty()) {
                        stamps_ = seen_;
                        phase_ = Phase::Sweep;
                    } else {
                        phase_ = Phase::Gather;
                    }
                    if (n_ == 1) return finish_helper();
                } else {
                    covered_.assign(static_cast<std::size_t>(n_), 0);
                    result_.assign(static_cast<std::size_t>(n_), nullptr);
                    covered_[static_cast<std::size_t>(self_)] = 1;
                    result_[static_cast<std::size_t>(self_)] = own_value_;
                    reads_ = 0;
                    phase_ = Phase::ClientLoop;
                    if (n_ == 1) return finish_client();
                }
                return std::nullopt;
            case Phase::Gather:
                ++gather_reads_;
                if (note)
                    seen_[static_cast<std::size_t>(cell->writer)] = std::max(
                        seen_[static_cast<std::size_t>(cell->writer)],
                        note->epoch);
                return std::nullopt;
            case Phase::Sweep:
                values_[static_cast<std::size_t>(op.reg)] =
                    cell ? cell->value : nullptr;
                ++sweep_next_;
                return std::nullopt;
            case Phase::Publish: {
                published_stamps_ = stamps_;
                published_snapshot_ =
                    std::any_cast<ChampNote>(&op.cell->note)->snapshot;
                has_published_ = true;
                return finish_helper();
            }
            case Phase::ClientLoop: {
                ++reads_;
                covered_[static_cast<std::size_t>(op.reg)] = 1;
                result_[static_cast<std::size_t>(op.reg)] =
                    cell ? cell->value : nullptr;
                if (op.reg == my_helper_ && note && note->has_vector &&
                    note->stamps[static_cast<std::size_t>(self_)] >= epoch_) {
                    result_ = note->snapshot;
                    return finish_client();
                }
                for (int r = 0; r < n_; ++r)
                    if (!covered_[static_cast<std::size_t>(r)])
                        return std::nullopt;
                return finish_client();
            }
            case Phase::Idle: break;
        }
        throw std::logic_error("champion: absorb while idle");
    }

private:
    enum class Phase { Idle, Init, Gather, Sweep, Publish, ClientLoop };

    void freeze_roles(long step) {
        int helper = 0;
        const std::vector<int>* clients = nullptr;
        cfg_->roles_at(step, &helper, &clients);
        is_helper_ = (helper == self_);
        my_helper_ = -1;
        role_clients_.clear();
        if (is_helper_) {
            for (int c : *clients)
                if (c != self_ && c >= 0 && c < n_) role_clients_.push_back(c);
            seen_.assign(static_cast<std::size_t>(n_), 0);
            gather_pos_ = 0;
            gather_reads_ = 0;
            sweep_next_ = 0;
            values_.assign(static_cast<std::size_t>(n_), nullptr);
        } else if (std::find(clients->begin(), clients->end(), self_) !=
                   clients->end()) {
            my_helper_ = helper;
        }
    }

    bool gather_done() const {
        if (gather_reads_ >= 4 * static_cast<long>(n_)) return true;
        for (int c : role_clients_)
            if (seen_[static_cast<std::size_t>(c)] <=
                published_stamps_[static_cast<std::size_t>(c)])
                return false;
        return true;
    }

    std::optional<CollectOutcome> finish_helper() {
        values_[static_cast<std::size_t>(self_)] = own_value_;
        phase_ = Phase::Idle;
        return CollectOutcome{values_};
    }

    std::optional<CollectOutcome> finish_client() {
        phase_ = Phase::Idle;
        return CollectOutcome{result_};
    }

    int n_;
    int self_;
    std::shared_ptr<const ChampionConfig> cfg_;
    std::int64_t epoch_ = 0;

    // helper state that outlives tasks
    std::vector<std::int64_t> published_stamps_;
    std::vector<ValuePtr> published_snapshot_;
    bool has_published_ = false;

    // current task
    TaskKind kind_ = TaskKind::Collect;
    std::int64_t payload_ = 0;
    std::any meta_;
    Phase phase_ = Phase::Idle;
    bool is_helper_ = false;
    int my_helper_ = -1;
    std::vector<int> role_clients_;
    ValuePtr own_value_;
    // helper
    std::vector<std::int64_t> seen_;
    std::size_t gather_pos_ = 0;
    long gather_reads_ = 0;
    std::vector<std::int64_t> stamps_;
    int sweep_next_ = 0;
    std::vector<ValuePtr> values_;
    // client
    std::vector<char> covered_;
    std::vector<ValuePtr> result_;
    long reads_ = 0;
};

}  // namespace

void ChampionConfig::roles_at(long step, int* helper_out,
                              const std::vector<int>** clients_out) const {
    if (phases.empty()) {
        *helper_out = helper;
        *clients_out = &clients;
        return;
    }
    const PhaseRole* pick = &phases.back();
    for (const auto& ph : phases) {
        if (step >= ph.begin_step && step < ph.end_step) {
            pick = &ph;
            break;
        }
    }
    *helper_out = pick->helper;
    *clients_out = &pick->clients;
}

std::unique_ptr<CollectCore> make_trivial_core(int n, int pid) {
    return std::make_unique<TrivialCore>(n, pid);
}

std::unique_ptr<CollectCore> make_coop_core(int n, int pid) {
    return std::make_unique<CoopCore>(n, pid);
}

std::unique_ptr<CollectCore> make_champion_core(
    int n, int pid, std::shared_ptr<const ChampionConfig> config) {
    return std::make_unique<ChampionCore>(n, pid, std::move(config));
}

std::shared_ptr<const ChampionConfig> default_champion_config(int n) {
    auto cfg = std::make_shared<ChampionConfig>();
    cfg->helper = 0;
    for (int i = 1; i < n; ++i) cfg->clients.push_back(i);
    return cfg;
}

CoreFactory find_algorithm(const std::string& name) {
    if (name == "trivial")
        return [](int n, int pid) { return make_trivial_core(n, pid); };
    if (name == "coop")
        return [](int n, int pid) { return make_coop_core(n, pid); };
    if (name == "champion-ts")
        return [](int n, int pid) {
            return make_champion_core(n, pid, default_champion_config(n));
        };
    throw ConfigError("unknown algorithm: " + name);
}

std::vector<std::string> algorithm_names() {
    return {"trivial", "coop", "champion-ts"};
}

}  // namespace arena
