// Typed client for the analysis service. The studio never recomputes
// geometry or certificate numbers: everything displayed comes from here.

export interface PlantDoc {
  num: number[];
  den: number[];
}

export interface PlantResponse {
  session: string;
  n_p: number;
  nyquist: [number, number][];
  inverted: RegionDoc;
}

export interface RegionDoc {
  kind: string;
  boundary: [number, number][];
  loops?: number[];
  unbounded?: boolean;
}

export interface EvaluateResponse {
  separation: number;
  gain_bound: number | null;
  certified: boolean;
  meets_target: boolean;
  kappa: [number, number];
  controller_region: RegionDoc;
  /** raw JSON text of the separation field, for byte-exact display */
  separationText: string;
}

export interface TrajectoryResponse {
  times: number[];
  y: number[];
  e: number[];
  jumps: number[];
  diverged: boolean;
  diagnosis?: string;
}

export interface DesignResponse {
  kp: number | null;
  kr: number | null;
  separation: number;
  gain_bound: number | null;
  feasible: boolean;
}

export class ServiceError extends Error {}

/** Extract the raw token of a top-level JSON number field. */
export function rawNumberToken(body: string, field: string): string | null {
  const m = body.match(new RegExp(`"${field}"\\s*:\\s*([^,}\\s]+)`));
  return m ? m[1] : null;
}

export class ApiClient {
  constructor(private baseUrl: string = "") {}

  private async post(path: string, body: unknown): Promise<{ doc: any; text: string }> {
    let resp: Response;
    try {
      resp = await fetch(this.baseUrl + path, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch (err) {
      throw new ServiceError(`service unreachable: ${err}`);
    }
    const text = await resp.text();
    let doc: any;
    try {
      doc = JSON.parse(text);
    } catch {
      throw new ServiceError(`malformed response from ${path}`);
    }
    if (!resp.ok) {
      throw new ServiceError(doc.error ?? `request to ${path} failed (${resp.status})`);
    }
    return { doc, text };
  }

  async loadPlant(plant: PlantDoc): Promise<PlantResponse> {
    const { doc } = await this.post("/plant", plant);
    return doc as PlantResponse;
  }

  async evaluate(
    session: string,
    kp: number,
    kr: number,
    gammaHat: number,
  ): Promise<EvaluateResponse> {
    const { doc, text } = await this.post("/evaluate", {
      session,
      kp,
      kr,
      gamma_hat: gammaHat,
    });
    const out = doc as EvaluateResponse;
    out.separationText = rawNumberToken(text, "separation") ?? String(doc.separation);
    return out;
  }

  async simulate(
    session: string,
    kp: number,
    kr: number,
    horizon: number,
    variant: "reset" | "lti",
  ): Promise<TrajectoryResponse> {
    const { doc } = await this.post("/simulate", { session, kp, kr, horizon, variant });
    return doc as TrajectoryResponse;
  }

  async designMinKp(
    session: string,
    kr: number,
    gammaHat: number,
    kpRange: [number, number],
  ): Promise<DesignResponse> {
    const { doc } = await this.post("/design", {
      session,
      mode: "min-kp",
      kr,
      gamma_hat: gammaHat,
      kp_range: kpRange,
    });
    return doc as DesignResponse;
  }
}
