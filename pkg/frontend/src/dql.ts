/** Form model for the curated DQL subset, and its mapping to the wire
 * string. The full format stays reachable through the raw editor; this
 * module only covers the fields the form exposes. */

export interface DiseaseRow {
  code: string;
  incidence: number;
  resource: number;
}

export interface DqlForm {
  population: number;
  growthRate: number;
  budget: number;
  gdp: number | null;
  maternalHealth: number | null;
  fertility: number | null;
  fac: number | null;
  water: number | null;
  infra: number | null;
  diseases: DiseaseRow[];
}

export function defaultForm(): DqlForm {
  return {
    population: 50000,
    growthRate: 2,
    budget: 5,
    gdp: null,
    maternalHealth: null,
    fertility: null,
    fac: null,
    water: null,
    infra: null,
    diseases: [],
  };
}

function num(value: number): string {
  // plain decimal notation; the parser rejects exponent forms
  return Number.isInteger(value) ? String(value) : value.toFixed(6).replace(/0+$/, "").replace(/\.$/, "");
}

/** Serialize the form into a DQL string the service parser accepts. */
export function serializeDqlForm(form: DqlForm): string {
  const dims: string[] = [];
  const p = [`pop=${num(form.population)}`, `growth_rate=${num(form.growthRate)}`];
  dims.push(`P:${p.join(",")}`);
  if (form.diseases.length > 0) {
    const entries = form.diseases
      .map((d) => `${d.code}(inc=${num(d.incidence)},res=${num(d.resource)})`)
      .join(",");
    dims.push(`H:dis=${entries}`);
  }
  const m: string[] = [];
  if (form.fertility !== null) m.push(`fert=${num(form.fertility)}`);
  if (form.maternalHealth !== null) m.push(`health=${num(form.maternalHealth)}`);
  if (m.length > 0) dims.push(`M:${m.join(",")}`);
  const i: string[] = [];
  if (form.fac !== null) i.push(`fac=${num(form.fac)}`);
  if (form.water !== null) i.push(`water=${num(form.water)}`);
  if (form.infra !== null) i.push(`infra=${num(form.infra)}`);
  if (i.length > 0) dims.push(`I:${i.join(",")}`);
  const x: string[] = [];
  if (form.gdp !== null) x.push(`gdp=${num(form.gdp)}`);
  x.push(`budget=${num(form.budget)}`);
  dims.push(`X:${x.join(",")}`);
  return `${dims.join("|")}.`;
}

function pick(text: string, key: string): number | null {
  const match = text.match(new RegExp(`[:,(]${key}=(-?\\d+(?:\\.\\d+)?)`));
  return match ? Number(match[1]) : null;
}

/** Best-effort extraction of the curated fields from any DQL string;
 * fields outside the subset are left to the raw editor. */
export function parseDqlSubset(text: string): DqlForm {
  const form = defaultForm();
  form.population = pick(text, "pop") ?? form.population;
  form.growthRate = pick(text, "growth_rate") ?? form.growthRate;
  form.budget = pick(text, "budget") ?? form.budget;
  form.gdp = pick(text, "gdp");
  form.maternalHealth = pick(text, "health");
  form.fertility = pick(text, "fert");
  form.fac = pick(text, "fac");
  form.water = pick(text, "water");
  form.infra = pick(text, "infra");
  form.diseases = [];
  const dis = text.match(/dis=([^|]*)/);
  if (dis) {
    const entry = /([A-Z])\(inc=(\d+(?:\.\d+)?),res=(\d+(?:\.\d+)?)\)/g;
    let m: RegExpExecArray | null;
    while ((m = entry.exec(dis[1])) !== null) {
      form.diseases.push({ code: m[1], incidence: Number(m[2]), resource: Number(m[3]) });
    }
  }
  return form;
}
