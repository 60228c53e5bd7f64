use super::{DomainError, TechKind, Technology};

/// Short-run marginal cost in EUR/MWh_el:
/// fuel / efficiency + carbon price · carbon content / efficiency + variable cost.
pub fn marginal_cost(tech: &Technology, carbon_price: f64) -> Result<f64, DomainError> {
    if tech.kind != TechKind::Dispatchable {
        return Err(DomainError::NotDispatchable(tech.id.clone()));
    }
    Ok(fuel_marginal_cost(
        tech.fuel_costs,
        tech.efficiency,
        tech.carbon_content,
        carbon_price,
        tech.var_costs,
    ))
}

pub fn fuel_marginal_cost(fuel: f64, efficiency: f64, carbon_content: f64, carbon_price: f64, var: f64) -> f64 {
    fuel / efficiency + carbon_price * carbon_content / efficiency + var
}

/// Annualized overnight cost (per unit per year) at interest `rate` over
/// `lifetime` years. A zero rate gives straight-line depreciation.
pub fn annuity(overnight: f64, lifetime: f64, rate: f64) -> f64 {
    debug_assert!(lifetime > 0.0 && rate >= 0.0);
    if rate == 0.0 {
        return overnight / lifetime;
    }
    let growth = libm::pow(1.0 + rate, lifetime);
    overnight * rate * growth / (growth - 1.0)
}

/// Converts a standing loss quoted per day into the per-hour fraction with
/// the same daily retention.
pub fn hourly_loss_from_daily(daily: f64) -> f64 {
    1.0 - libm::pow(1.0 - daily, 1.0 / 24.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::CapacityBound;
    use alloc::string::String;
    use proptest::prelude::*;

    pub(crate) fn gas(efficiency: f64) -> Technology {
        Technology {
            id: String::from("gas"),
            kind: TechKind::Dispatchable,
            capacity: CapacityBound::free(),
            lifetime: 25.0,
            overnight_costs: 400.0,
            fixed_costs: 15.0,
            efficiency,
            carbon_content: 0.201,
            fuel_costs: 26.03,
            var_costs: 0.0,
            series: None,
            storage: None,
            reservoir_energy: None,
        }
    }

    #[test]
    fn gas_turbine_marginal_costs() {
        // 26.03/0.4 + 130*0.201/0.4
        let ocgt = marginal_cost(&gas(0.4), 130.0).unwrap();
        assert!((ocgt - 130.4).abs() < 1e-9);
        let ccgt = marginal_cost(&gas(0.54), 130.0).unwrap();
        assert!((ccgt - (26.03 + 130.0 * 0.201) / 0.54).abs() < 1e-12);
        assert!((ccgt - 96.6).abs() < 0.01);
    }

    #[test]
    fn zero_cost_plant() {
        let mut t = gas(0.5);
        t.fuel_costs = 0.0;
        t.carbon_content = 0.0;
        assert_eq!(marginal_cost(&t, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn non_dispatchable_rejected() {
        let mut t = gas(0.5);
        t.kind = TechKind::VariableRenewable;
        assert!(matches!(marginal_cost(&t, 130.0), Err(DomainError::NotDispatchable(_))));
    }

    #[test]
    fn annuity_values() {
        // closed form 25.6048, quoted as 25.61
        assert!((annuity(400.0, 25.0, 0.04) - 25.604785).abs() < 1e-6);
        assert!((annuity(400.0, 25.0, 0.04) - 25.61).abs() < 0.01);
        assert_eq!(annuity(400.0, 25.0, 0.0), 16.0);
        assert_eq!(annuity(0.0, 25.0, 0.04), 0.0);
    }

    #[test]
    fn hourly_loss_matches_daily_retention() {
        let h = hourly_loss_from_daily(0.02);
        assert!((h - 0.000841).abs() < 5e-7);
        assert!((libm::pow(1.0 - h, 24.0) - 0.98).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn marginal_cost_monotone(fuel in 0.0f64..200.0, dfuel in 0.0f64..50.0,
                                  co2 in 0.0f64..300.0, dco2 in 0.0f64..100.0,
                                  eff in 0.05f64..1.0) {
            let mut t = gas(eff);
            t.fuel_costs = fuel;
            let base = marginal_cost(&t, co2).unwrap();
            prop_assert!(marginal_cost(&t, co2 + dco2).unwrap() >= base);
            t.fuel_costs = fuel + dfuel;
            prop_assert!(marginal_cost(&t, co2).unwrap() >= base);
        }

        #[test]
        fn annuity_reconstructs_capital_recovery(c in 1.0f64..5000.0, t in 1u32..80, r in 0.001f64..0.2) {
            let t = t as f64;
            let g = libm::pow(1.0 + r, t);
            let a = annuity(c, t, r);
            let lhs = a * (g - 1.0);
            let rhs = c * r * g;
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs());
        }
    }
}
