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

#include "rasim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rasim
{
    namespace
    {
        constexpr double kPi = std::numbers::pi;

        void require_unit(const Vec3 &v, const char *what)
        {
            if (!v.allFinite() || std::abs(v.norm() - 1.0) > 1e-9)
                throw std::invalid_argument(std::string("directional_gain: ") + what + " must be a unit vector");
        }
    } // namespace

    double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
    double to_db(double linear) { return 10.0 * std::log10(linear); }

    GainPattern GainPattern::directional(double p, double aperture, double wavelength)
    {
        GainPattern g{p, 2.0 * (2.0 * p + 1.0), aperture, wavelength};
        g.validate();
        return g;
    }

    GainPattern GainPattern::isotropic(double aperture, double wavelength)
    {
        GainPattern g{0.0, 1.0, aperture, wavelength};
        g.validate();
        return g;
    }

    void GainPattern::validate() const
    {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("GainPattern: directivity factor p must be >= 0");
        const bool conserving = std::abs(g0 - 2.0 * (2.0 * p + 1.0)) <= 1e-12 * g0;
        if (!conserving && !is_isotropic())
            throw std::invalid_argument("GainPattern: G0 must equal 2(2p+1) or be the isotropic (G0=1, p=0) override");
        if (!(aperture > 0.0))
            throw std::invalid_argument("GainPattern: element aperture S must be positive");
        if (!(wavelength > 0.0))
            throw std::invalid_argument("GainPattern: wavelength must be positive");
    }

    Scenario Scenario::reference()
    {
        const double lambda = 0.125;
        const double phi = kPi / 3.0;
        Scenario sc;
        sc.st = ArrayGeometry::upa(2, 2, lambda / 2.0);
        sc.pt = ArrayGeometry::ula_x(4, lambda / 2.0, Vec3(-55.0, 0.0, 0.0));
        sc.sr = Vec3(50.0 * std::cos(phi), 0.0, 50.0 * std::sin(phi));
        sc.pr = Vec3(-30.0, 0.0, 30.0);
        sc.pattern = GainPattern::directional(4.0, lambda * lambda / 4.0, lambda);
        sc.p_max = dbm_to_watt(23.0);
        sc.p0 = dbm_to_watt(23.0);
        sc.noise_power = dbm_to_watt(-80.0);
        sc.interference_limit = dbm_to_watt(-80.0);
        sc.theta_max = kPi / 3.0;
        sc.sr_angle = phi;
        return sc;
    }

    void Scenario::validate() const
    {
        pattern.validate();
        if (st.size() < 1 || pt.size() < 1)
            throw std::invalid_argument("Scenario: ST and PT arrays need at least one element");
        for (const auto &t : st.positions)
            if (std::abs(t.z()) > 1e-12)
                throw std::invalid_argument("Scenario: ST elements must lie in the z = 0 plane");
        if (!(p_max > 0.0) || !(p0 > 0.0) || !(noise_power > 0.0) || !(interference_limit > 0.0))
            throw std::invalid_argument("Scenario: P_max, P0, noise power and Gamma must be positive");
        if (!(theta_max > 0.0) || theta_max > kPi / 2.0 + 1e-15)
            throw std::invalid_argument("Scenario: theta_max must lie in (0, pi/2]");
        for (const auto &t : st.positions)
            if ((t - sr).norm() == 0.0 || (t - pr).norm() == 0.0)
                throw std::invalid_argument("Scenario: SR/PR coincides with an ST element");
        for (const auto &t : pt.positions)
            if ((t - sr).norm() == 0.0 || (t - pr).norm() == 0.0)
                throw std::invalid_argument("Scenario: SR/PR coincides with a PT element");
    }

    double directional_gain(const Vec3 &f, const Vec3 &u, const GainPattern &pat)
    {
        require_unit(f, "boresight f");
        require_unit(u, "direction u");
        const double c = f.dot(u);
        if (!(c > 0.0))
            return 0.0;
        return pat.g0 * std::pow(c, 2.0 * pat.p);
    }

    cdouble channel_coeff(const Vec3 &f, const Vec3 &element, const Vec3 &target, const GainPattern &pat)
    {
        const Vec3 delta = target - element;
        const double d = delta.norm();
        if (!(d > 0.0))
            throw std::invalid_argument("channel_coeff: target coincides with the element");
        const double g = directional_gain(f, delta / d, pat);
        const double mag = std::sqrt(pat.aperture * g / (4.0 * kPi * d * d));
        return std::polar(mag, -2.0 * kPi * d / pat.wavelength);
    }

    ChannelVector st_channel_vector(const PointingMatrix &f, const Vec3 &target, const Scenario &sc)
    {
        if (f.size() != sc.n())
            throw std::invalid_argument("st_channel_vector: pointing matrix size does not match the ST array");
        ChannelVector h(sc.n());
        for (int n = 0; n < sc.n(); ++n)
            h(n) = channel_coeff(f.column(n), sc.st.positions[n], target, sc.pattern);
        return h;
    }

    PtChannels pt_channels(const Scenario &sc)
    {
        const double lambda = sc.pattern.wavelength;
        auto friis = [lambda](const Vec3 &from, const Vec3 &to) {
            const double d = (to - from).norm();
            if (!(d > 0.0))
                throw std::invalid_argument("pt_channels: receiver coincides with a PT element");
            return std::polar(lambda / (4.0 * kPi * d), -2.0 * kPi * d / lambda);
        };
        PtChannels out{ChannelVector(sc.m()), ChannelVector(sc.m())};
        for (int m = 0; m < sc.m(); ++m)
        {
            out.to_pr(m) = friis(sc.pt.positions[m], sc.pr);
            out.to_sr(m) = friis(sc.pt.positions[m], sc.sr);
        }
        return out;
    }

    BeamVector pt_beamformer(const ChannelVector &h_pp, double p0)
    {
        const double nrm = h_pp.norm();
        if (!(nrm > 0.0))
            throw std::invalid_argument("pt_beamformer: PT-to-PR channel is zero");
        if (!(p0 > 0.0))
            throw std::invalid_argument("pt_beamformer: P0 must be positive");
        return std::sqrt(p0) * h_pp / nrm;
    }

} // namespace rasim
