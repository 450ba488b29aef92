//! Plain-text descriptions of what each task computes, printed by
//! `--explain <task>`.

pub const TASKS: [&str; 6] = [
    "pair-potential",
    "pair-force",
    "planar-force",
    "hemisphere-force",
    "divergence-demo",
    "limit-check",
];

pub fn text(task: &str) -> Option<&'static str> {
    match task {
        "pair-potential" => Some(PAIR_POTENTIAL),
        "pair-force" => Some(PAIR_FORCE),
        "planar-force" => Some(PLANAR_FORCE),
        "hemisphere-force" => Some(HEMISPHERE_FORCE),
        "divergence-demo" => Some(DIVERGENCE_DEMO),
        "limit-check" => Some(LIMIT_CHECK),
        _ => None,
    }
}

const PAIR_POTENTIAL: &str = "\
pair-potential: interaction energy of atom A (excited or ground state) with a
ground-state atom B at separation R, both embedded in the dilute gas medium.
Natural units, hbar = c = 1.

The potential splits into two channels, reported per row:

  U_nonresonant: an integral along the imaginary frequency axis,
      -(1/pi) int_0^inf du alpha_A(iu) alpha_B(iu) e^{-2 n(iu) u R}
          [u^4 + 2u^3/(nR) + 5u^2/(nR)^2 + 6u/(nR)^3 + 3/(nR)^4] / R^2,
      where n(iu) is the medium's refractive index. It is present for any
      pair and always attractive for ground-state atoms.

  U_resonant: present only for an excited atom A — the pole contribution of
      the emitted-photon frequency,
      Re[ -(4/9) K (1 + 1/x^2 + 3/x^4) ] e^{-2 Im(n) omega_A R} / R^2,
      with x = n(omega_A) omega_A R and K the resonant coupling
      d2_A d2_B omega_B omega_A^4 / (omega_B^2 - omega_A^2 - i gamma_B
      omega_A). The exponential factor is the absorption of the exchanged
      photon by the host gas. Its sign follows sign(omega_A - omega_B):
      repulsive when atom A lies above atom B, attractive below.

U_total = U_resonant + U_nonresonant; err is the quadrature error estimate
of the integrated channel.";

const PAIR_FORCE: &str = "\
pair-force: radial force of the resonant channel on atom A at separation R,
defined as the derivative of the resonant potential along R, so a positive
value means attraction toward atom B. Natural units, hbar = c = 1.

  envelope = slab: the unsuppressed dilute-medium force
      F = (8/9) n0-independent Re[K] (1 + 2b/R^2 + 9b^2/R^4) / R^3,
      b = 1/omega_A^2. Absorption is accounted for later, by truncating
      volume integrals at one photon mean free path.

  envelope = exponential: the same force multiplied by
      e^{-(R - r0)/L_ph}, plus the derivative of the envelope itself,
      referenced to an emission radius r0 where the envelope is one. L_ph
      is the photon mean free path (override with task.l_ph_override).

The err column is zero: both variants are closed forms.";

const PLANAR_FORCE: &str = "\
planar-force: net attraction of a half-space of gas (surface at distance z0
from the atom) on the excited atom, in the slab model: the unsuppressed pair
force integrated over a layer of one photon mean free path L behind the
surface. Natural units, hbar = c = 1.

  F_closed = (8 pi / 9) n0 Re[K] [ ln(1 + L/z0)
             + (b/2)(1/z0^2 - 1/W^2) + (3 b^2/4)(1/z0^4 - 1/W^4) ],
  with W = z0 + L and b = 1/omega_A^2.

  F_oracle: the same quantity by brute-force cylindrical volume quadrature
  of the axial force density over the layer; err is its error estimate.

Limits: F ~ (2 pi / 3) n0 Re[K] b^2 / z0^4 for z0 far below the wavelength,
and F ~ (8 pi / 9) n0 Re[K] L / z0 for z0 far beyond L (density-independent
once the physical L is inserted, since n0 L is fixed).";

const HEMISPHERE_FORCE: &str = "\
hemisphere-force: axial force of a gas-filled hemispherical shell (inner
radius r0, atom at the center of the flat face) on the excited atom. The
oracle integrates the exponentially enveloped pair force over the shell;
the angular projection contributes a factor pi. Natural units,
hbar = c = 1.

  F_oracle = pi n0 int_{r0}^{r0 + cutoff L} r^2 F_env(r) dr

  F_far  = (4 pi / 9) n0 Re[K] (1 + 2 L / r0)   (r0 >> L and wavelength)
  F_near = 2 pi n0 Re[K] b^2 / r0^4             (r0 << L and wavelength)

Both closed forms are printed at every radius; a stderr note marks sweep
ends where a regime's validity window is violated. err belongs to
F_oracle.";

const DIVERGENCE_DEMO: &str = "\
divergence-demo: why absorption is load-bearing. Integrates the far-zone
pair-force magnitude n0 |K3| / R^2 over a half-space beyond standoff z0,
truncated at growing cutoff radii C, twice: once with no absorption
(I_vacuum) and once damped by e^{-R/L_ph} (I_absorbing). Natural units,
hbar = c = 1.

The vacuum column grows linearly with C without bound — the slowly decaying
retarded force makes the total force on the atom diverge with the body
size. The absorbing column saturates once C exceeds a few mean free paths:
the medium itself absorbs the exchanged photon, so only a shell of depth
~L_ph contributes. err sums both quadrature estimates per row.";

const LIMIT_CHECK: &str = "\
limit-check: evaluates the four closed-form asymptotes against the computed
channels at canonical probe separations and reports each ratio with a 1%
pass gate, as JSON. Natural units, hbar = c = 1.

  excited-short (R = lambda/100): resonant channel vs the near-zone law
      -(4/3) d2_A d2_B omega_B / ((omega_B^2 - omega_A^2) R^6).
  excited-long (R = 100 lambda): resonant channel vs the retarded law
      -(4/9) d2_A d2_B omega_A^4 omega_B / ((omega_B^2 - omega_A^2) R^2).
  ground-short: ground-pair potential vs the van der Waals law with the
      medium-screened integral coefficient.
  ground-long: ground-pair potential vs the retarded law with static
      polarizabilities and the static refractive index.

lambda is the probe atom's transition wavelength 2 pi / omega_A.";
