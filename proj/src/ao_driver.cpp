// SPDX-License-Identifier: Apache-2.0
//
// rasim: rotatable-antenna spectrum-sharing simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rasim/ao_driver.hpp"

#include "rasim/errors.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rasim
{
    namespace
    {
        using Clock = std::chrono::steady_clock;

        double elapsed_ms(Clock::time_point since)
        {
            return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
        }

        struct Link
        {
            ChannelVector h_ss, h_sp;
        };

        Link st_links(const PointingMatrix &f, const Scenario &sc)
        {
            return {st_channel_vector(f, sc.sr, sc), st_channel_vector(f, sc.pr, sc)};
        }
    } // namespace

    void AlgoConfig::validate() const
    {
        if (!(epsilon > 0.0))
            throw std::invalid_argument("AlgoConfig: epsilon must be positive");
        if (max_outer < 1)
            throw std::invalid_argument("AlgoConfig: max_outer must be >= 1");
        if (random_realizations < 1)
            throw std::invalid_argument("AlgoConfig: random_realizations must be >= 1");
        if (!(sca.kappa > 0.0) || !(sca.delta > 0.0) || sca.max_iterations < 1)
            throw std::invalid_argument("AlgoConfig: kappa, delta must be positive and SCA iterations >= 1");
    }

    AoResult alternating_optimize(const Scenario &sc, const AlgoConfig &cfg)
    {
        sc.validate();
        cfg.validate();
        const auto start = Clock::now();

        const PtChannels pt = pt_channels(sc);
        const BeamVector v = pt_beamformer(pt.to_pr, sc.p0);
        const LinkGeometry geo = LinkGeometry::from(sc);

        auto record = [&](int iteration, const BeamVector &w, const PointingMatrix &f, int sca_its) {
            const Link l = st_links(f, sc);
            const CosineCache cache = build_cosine_cache(f.stacked(), w, geo, sc.pattern.p, cfg.sca.kappa);
            return AoIterate{iteration,
                             sinr(w, l.h_ss, v, pt.to_sr, sc.noise_power),
                             objective_J(cache),
                             constraint_U(cache),
                             w.squaredNorm(),
                             interference_power(w, l.h_sp),
                             sca_its,
                             elapsed_ms(start)};
        };

        AoResult res;
        res.f = PointingMatrix::uniform(sc.n());
        Link link = st_links(res.f, sc);
        res.w = optimal_beamformer(link.h_ss, link.h_sp, sc.p_max, sc.interference_limit).w;
        res.trace.push_back(record(0, res.w, res.f, 0));
        double prev = res.trace.back().sinr;

        for (int it = 1; it <= cfg.max_outer; ++it)
        {
            // Beamformer first: it restores |w^H h_SP|^2 <= Gamma at the current pointing,
            // which makes the pointing step's anchor feasible.
            const BeamVector w = optimal_beamformer(link.h_ss, link.h_sp, sc.p_max, sc.interference_limit).w;
            ScaResult sca;
            try
            {
                sca = sca_pointing_opt(w, res.f, sc, cfg.sca);
            }
            catch (const SolverError &e)
            {
                res.diagnostic = e.what();
                break;
            }
            res.w = w;
            res.f = sca.f;
            res.iterations = it;
            link = st_links(res.f, sc);
            res.trace.push_back(record(it, res.w, res.f, sca.iterations));

            const double cur = res.trace.back().sinr;
            if (prev > 0.0 ? std::abs(cur - prev) / prev <= cfg.epsilon : cur == prev)
            {
                res.converged = true;
                break;
            }
            prev = cur;
        }
        return res;
    }

    std::string_view scheme_name(Scheme s)
    {
        switch (s)
        {
        case Scheme::Rotatable:
            return "ra";
        case Scheme::Fixed:
            return "fixed";
        case Scheme::Random:
            return "random";
        case Scheme::Isotropic:
            return "isotropic";
        }
        return "unknown";
    }

    std::optional<Scheme> parse_scheme(std::string_view name)
    {
        for (Scheme s : kAllSchemes)
            if (scheme_name(s) == name)
                return s;
        return std::nullopt;
    }

    PointingMatrix random_pointing(int n, double theta_max, std::mt19937_64 &rng)
    {
        // Draws through generate_canonical so the sequence does not depend on distribution internals.
        const double cmin = std::cos(theta_max);
        Eigen::Matrix3Xd cols(3, n);
        for (int k = 0; k < n; ++k)
        {
            const double u1 = std::generate_canonical<double, 53>(rng);
            const double u2 = std::generate_canonical<double, 53>(rng);
            const double cz = 1.0 - u1 * (1.0 - cmin);
            const double az = 2.0 * std::numbers::pi * u2;
            const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
            cols.col(k) = Vec3(sz * std::cos(az), sz * std::sin(az), cz);
        }
        return PointingMatrix(std::move(cols));
    }

    SchemeResult evaluate_scheme(const Scenario &sc, Scheme scheme, const AlgoConfig &cfg)
    {
        sc.validate();
        cfg.validate();
        SchemeResult out;
        out.scheme = scheme;
        out.scenario = sc;
        out.iterations = 1;

        const PtChannels pt = pt_channels(sc);
        const BeamVector v = pt_beamformer(pt.to_pr, sc.p0);

        auto closed_form = [&](const Scenario &s, const PointingMatrix &f) {
            const Link l = st_links(f, s);
            // Every element facing away from the SR leaves nothing to beamform with.
            Realization r{l.h_ss.norm() > 0.0 ? optimal_beamformer(l.h_ss, l.h_sp, s.p_max, s.interference_limit).w
                                              : BeamVector(BeamVector::Zero(s.n())),
                          f};
            out.sinr += sinr(r.w, l.h_ss, v, pt.to_sr, s.noise_power);
            out.interference += interference_power(r.w, l.h_sp);
            out.tx_power += r.w.squaredNorm();
            out.realizations.push_back(std::move(r));
        };

        switch (scheme)
        {
        case Scheme::Rotatable:
        {
            AoResult ao = alternating_optimize(sc, cfg);
            const Link l = st_links(ao.f, sc);
            out.sinr = sinr(ao.w, l.h_ss, v, pt.to_sr, sc.noise_power);
            out.interference = interference_power(ao.w, l.h_sp);
            out.tx_power = ao.w.squaredNorm();
            out.iterations = ao.iterations;
            out.realizations.push_back({ao.w, ao.f});
            out.ao = std::move(ao);
            break;
        }
        case Scheme::Fixed:
            closed_form(sc, PointingMatrix::uniform(sc.n()));
            break;
        case Scheme::Isotropic:
            out.scenario.pattern = GainPattern::isotropic(sc.pattern.aperture, sc.pattern.wavelength);
            closed_form(out.scenario, PointingMatrix::uniform(sc.n()));
            break;
        case Scheme::Random:
        {
            std::mt19937_64 rng(cfg.seed);
            for (int r = 0; r < cfg.random_realizations; ++r)
                closed_form(sc, random_pointing(sc.n(), sc.theta_max, rng));
            const double k = static_cast<double>(cfg.random_realizations);
            out.sinr /= k;
            out.interference /= k;
            out.tx_power /= k;
            break;
        }
        }
        return out;
    }

} // namespace rasim
