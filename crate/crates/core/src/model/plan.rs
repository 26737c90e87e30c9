use std::collections::BTreeMap;
use std::ops::{Add, AddAssign};

use serde::{Deserialize, Serialize};

use super::cost::{bid_price, supplier_delay_penalty, supplier_total_cost};
use super::types::SupplierParams;
use crate::error::ModelError;

/// Supplier cost split into its cost families.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub production_ord: f64,
    pub production_ot: f64,
    pub holding: f64,
    pub holding_interval: f64,
    pub delivery_fixed: f64,
    pub delivery_var: f64,
    pub setup: f64,
    pub delay: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn component_sum(&self) -> f64 {
        self.production_ord
            + self.production_ot
            + self.holding
            + self.holding_interval
            + self.delivery_fixed
            + self.delivery_var
            + self.setup
            + self.delay
    }

    /// Scales every component; used for repeated idle periods.
    pub fn scaled(&self, k: f64) -> Self {
        Self {
            production_ord: self.production_ord * k,
            production_ot: self.production_ot * k,
            holding: self.holding * k,
            holding_interval: self.holding_interval * k,
            delivery_fixed: self.delivery_fixed * k,
            delivery_var: self.delivery_var * k,
            setup: self.setup * k,
            delay: self.delay * k,
            total: self.total * k,
        }
    }
}

impl Add for CostBreakdown {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for CostBreakdown {
    fn add_assign(&mut self, rhs: Self) {
        self.production_ord += rhs.production_ord;
        self.production_ot += rhs.production_ot;
        self.holding += rhs.holding;
        self.holding_interval += rhs.holding_interval;
        self.delivery_fixed += rhs.delivery_fixed;
        self.delivery_var += rhs.delivery_var;
        self.setup += rhs.setup;
        self.delay += rhs.delay;
        self.total += rhs.total;
    }
}

/// What a supplier does with one item in one period.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PeriodActivity {
    pub ordinary: u32,
    pub overtime: u32,
    /// Quantity loaded on each vehicle; zero means the vehicle stays idle.
    pub sends: Vec<u32>,
}

impl PeriodActivity {
    pub fn idle(vehicles: u32) -> Self {
        Self {
            ordinary: 0,
            overtime: 0,
            sends: vec![0; vehicles as usize],
        }
    }

    pub fn production(&self) -> u32 {
        self.ordinary + self.overtime
    }

    pub fn shipped(&self) -> u32 {
        self.sends.iter().sum()
    }
}

/// One supplier's lower-level solution for one item over the whole horizon.
///
/// Period vectors have one entry per period `t = 1..=T`; `inventory` has
/// `T + 1` entries with the opening stock at index 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemPlan {
    pub item: usize,
    pub quantity: u32,
    pub prod_ord: Vec<u32>,
    pub prod_ot: Vec<u32>,
    pub sends: Vec<Vec<u32>>,
    pub vehicle_used: Vec<Vec<bool>>,
    pub setup: Vec<bool>,
    pub inventory: Vec<u32>,
    pub delay_penalty: Vec<f64>,
    pub total_cost: f64,
    pub price: f64,
}

impl ItemPlan {
    /// Builds a plan from per-period activities, deriving inventory, setup and
    /// vehicle flags, delay penalties, cost and bid price.
    pub fn assemble(
        params: &SupplierParams,
        item: usize,
        quantity: u32,
        opening_stock: u32,
        lt_lower: u32,
        activities: &[PeriodActivity],
    ) -> Result<Self, ModelError> {
        let horizon = activities.len();
        let mut plan = Self {
            item,
            quantity,
            prod_ord: Vec::with_capacity(horizon),
            prod_ot: Vec::with_capacity(horizon),
            sends: Vec::with_capacity(horizon),
            vehicle_used: Vec::with_capacity(horizon),
            setup: Vec::with_capacity(horizon),
            inventory: Vec::with_capacity(horizon + 1),
            delay_penalty: Vec::with_capacity(horizon),
            total_cost: 0.0,
            price: 0.0,
        };
        plan.inventory.push(opening_stock);
        let mut stock = i64::from(opening_stock);
        for (idx, act) in activities.iter().enumerate() {
            let t = idx as u32 + 1;
            stock += i64::from(act.production()) - i64::from(act.shipped());
            if stock < 0 {
                return Err(ModelError::PlanMismatch(format!(
                    "inventory of item {item} turns negative in period {t}"
                )));
            }
            plan.prod_ord.push(act.ordinary);
            plan.prod_ot.push(act.overtime);
            plan.setup.push(act.production() > 0);
            plan.vehicle_used
                .push(act.sends.iter().map(|&s| s > 0).collect());
            plan.sends.push(act.sends.clone());
            plan.inventory.push(stock as u32);
            plan.delay_penalty.push(supplier_delay_penalty(
                act.shipped(),
                t,
                lt_lower,
                params.delay_factor,
            ));
        }
        let cost = supplier_total_cost(&plan, params, item)?;
        plan.total_cost = cost.total;
        if quantity > 0 {
            plan.price = bid_price(cost.total, plan.delay_sum(), quantity, params.profit_rate)?;
        }
        Ok(plan)
    }

    pub fn horizon(&self) -> u32 {
        self.prod_ord.len() as u32
    }

    /// Total quantity shipped in period `t` (1-based).
    pub fn shipped_in(&self, t: u32) -> u32 {
        self.sends[t as usize - 1].iter().sum()
    }

    pub fn total_shipped(&self) -> u64 {
        self.sends.iter().flatten().map(|&s| u64::from(s)).sum()
    }

    pub fn total_produced(&self) -> u64 {
        self.prod_ord
            .iter()
            .chain(&self.prod_ot)
            .map(|&p| u64::from(p))
            .sum()
    }

    pub fn delay_sum(&self) -> f64 {
        self.delay_penalty.iter().sum()
    }

    pub fn opening_stock(&self) -> u32 {
        self.inventory[0]
    }

    pub fn closing_stock(&self) -> u32 {
        *self.inventory.last().expect("inventory has an opening entry")
    }

    /// True when the order is filled from stock without producing.
    pub fn is_warehouse_only(&self) -> bool {
        self.total_produced() == 0
    }

    /// Number of periods with any production or shipment.
    pub fn active_periods(&self) -> usize {
        (1..=self.horizon())
            .filter(|&t| {
                let i = t as usize - 1;
                self.prod_ord[i] + self.prod_ot[i] > 0 || self.shipped_in(t) > 0
            })
            .count()
    }
}

/// A supplier's plans for every item allocated to it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SupplierPlan {
    pub items: BTreeMap<usize, ItemPlan>,
}

impl SupplierPlan {
    pub fn insert(&mut self, plan: ItemPlan) {
        self.items.insert(plan.item, plan);
    }

    pub fn get(&self, item: usize) -> Option<&ItemPlan> {
        self.items.get(&item)
    }

    /// `Z_i = Σ_j TC_ij`, the supplier's lower-level objective.
    pub fn total_cost(&self) -> f64 {
        self.items.values().map(|p| p.total_cost).sum()
    }
}
