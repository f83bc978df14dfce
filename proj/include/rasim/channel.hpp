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

#ifndef RASIM_CHANNEL_HPP
#define RASIM_CHANNEL_HPP

#include "rasim/geometry.hpp"
#include "rasim/pointing.hpp"

#include <Eigen/Core>

#include <complex>

namespace rasim
{
    using cdouble = std::complex<double>;
    using ChannelVector = Eigen::VectorXcd;
    using BeamVector = Eigen::VectorXcd;

    double dbm_to_watt(double dbm);
    double watt_to_dbm(double watt);
    double to_db(double linear);

    // G(eps) = G0 cos^{2p}(eps) on the front hemisphere, zero behind.
    struct GainPattern
    {
        double p = 4.0;            // directivity factor
        double g0 = 18.0;          // boresight gain
        double aperture = 0.0;     // element size S [m^2]
        double wavelength = 0.125; // [m]

        // G0 = 2(2p+1), which makes the pattern integrate to 4*pi over the sphere.
        static GainPattern directional(double p, double aperture, double wavelength);
        // G0 = 1, p = 0.
        static GainPattern isotropic(double aperture, double wavelength);

        bool is_isotropic() const { return p == 0.0 && g0 == 1.0; }
        void validate() const;
    };

    // Complete physical setup of one secondary/primary link pair.
    struct Scenario
    {
        ArrayGeometry st;                 // ST array, N rotatable elements on z = 0
        ArrayGeometry pt;                 // PT array, M fixed isotropic elements
        Vec3 sr{0, 0, 0};                 // secondary receiver position [m]
        Vec3 pr{0, 0, 0};                 // primary receiver position [m]
        GainPattern pattern;              // ST element pattern
        double p_max = 0.0;               // ST power budget [W]
        double p0 = 0.0;                  // PT transmit power [W]
        double noise_power = 0.0;         // sigma_s^2 at the SR [W]
        double interference_limit = 0.0;  // Gamma at the PR [W]
        double theta_max = 0.0;           // zenith cap [rad]
        double sr_angle = 0.0;            // phi, SR elevation in the x-z plane [rad]

        // Reference setup: N = M = 4, lambda = 0.125 m, half-wavelength spacing,
        // SR at 50[cos phi, 0, sin phi] with phi = pi/3, PR at [-30,0,30], PT at [-55,0,0],
        // P_max = P0 = 23 dBm, sigma^2 = Gamma = -80 dBm, p = 4, theta_max = pi/3, S = lambda^2/4.
        static Scenario reference();

        int n() const { return st.size(); }
        int m() const { return pt.size(); }

        // Throws std::invalid_argument when an invariant is violated.
        void validate() const;
    };

    double directional_gain(const Vec3 &f, const Vec3 &u, const GainPattern &pat);

    // Near-field LoS coefficient sqrt(S G / (4 pi d^2)) exp(-j 2 pi d / lambda).
    cdouble channel_coeff(const Vec3 &f, const Vec3 &element, const Vec3 &target, const GainPattern &pat);

    // Entry n = channel_coeff(f_n, t_ST,n, target). h_SS for target = SR, h_SP for target = PR.
    ChannelVector st_channel_vector(const PointingMatrix &f, const Vec3 &target, const Scenario &sc);

    struct PtChannels
    {
        ChannelVector to_pr; // h_PP
        ChannelVector to_sr; // h_PS
    };

    // Free-space channels from isotropic unit-gain PT elements: (lambda / (4 pi d)) exp(-j 2 pi d / lambda).
    PtChannels pt_channels(const Scenario &sc);

    // Maximum ratio transmission toward the PR, ||v||^2 = P0.
    BeamVector pt_beamformer(const ChannelVector &h_pp, double p0);

} // namespace rasim

#endif
