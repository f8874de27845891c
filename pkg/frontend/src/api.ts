/** Typed client for the platform's REST endpoints.
 *
 * Every number shown in the UI comes out of these responses; the UI never
 * recomputes scores, rankings, or profiles client-side.
 */

export interface WidgetInfo {
  id: string;
  title: string;
  description: string;
  launch_url: string;
  techniques: string[];
  categories: string[];
  srl: boolean;
  add_count: number;
}

export interface Recommendation {
  kind: string;
  item_id: string;
  score: number;
  reasons: string[];
}

export interface InstanceLayout {
  x: number;
  y: number;
  width: number;
  height: number;
}

export interface WidgetInstance {
  instance_id: string;
  widget_id: string;
  layout: InstanceLayout;
  added_by: string;
  added_at: number;
}

export interface SpaceView {
  name: string;
  owner: string;
  members: string[];
  member_order: string[];
  created_at: number;
  load_count: number;
  load_days: string[];
  shared_store: Record<string, unknown>;
  activities: { name: string; widgets: WidgetInstance[] }[];
  share_url: string;
}

export interface LearnerFeed {
  learner_id: string;
  acquired: Record<string, unknown>[];
  goals: Record<string, unknown>[];
  gap: { key: string[]; have: number; want: number }[];
  strategy_counts: Record<string, number>;
  uses: { distinct: string[]; counts: Record<string, number> };
  parameters: Record<string, string>;
  recent_applications: { ts: number; technique: string }[];
}

export interface StrategyProfile {
  counts: Record<string, number>;
  unclassified: number;
}

export interface ClusterRow {
  signature: { verb: string; object_type: string; widget: string | null };
  occurrences: number;
}

export interface Template {
  id: string;
  title: string;
  entities: string[];
}

export interface LintFinding {
  code: string;
  subject: string;
  message: string;
}

export interface SchedulerStateDoc {
  learner_id: string;
  counts: Record<string, number>;
  cooldowns: Record<string, number>;
  cursor: string;
  pending: string[];
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  token: string | null = null;
  learner: string | null = null;

  constructor(
    private base: string = "",
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const resp = await this.fetchImpl(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!resp.ok) {
      let detail = `${resp.status}`;
      try {
        const doc = await resp.json();
        detail = doc.error ?? doc.detail ?? detail;
      } catch {
        /* non-JSON error body */
      }
      throw new Error(`${method} ${path}: ${detail}`);
    }
    return (await resp.json()) as T;
  }

  async login(learner: string): Promise<string> {
    const doc = await this.request<{ token: string }>("POST", "/api/login", { learner });
    this.token = doc.token;
    this.learner = learner;
    return doc.token;
  }

  // catalog
  searchWidgets(q: string, category?: string): Promise<{ widgets: WidgetInfo[] }> {
    const params = new URLSearchParams({ q });
    if (category) params.set("category", category);
    return this.request("GET", `/api/catalog/widgets?${params}`);
  }
  widget(id: string): Promise<WidgetInfo> {
    return this.request("GET", `/api/catalog/widgets/${id}`);
  }
  templates(): Promise<{ templates: Template[] }> {
    return this.request("GET", "/api/catalog/templates");
  }
  bundles(): Promise<{ bundles: { id: string; title: string; widgets: string[] }[] }> {
    return this.request("GET", "/api/catalog/bundles");
  }

  // spaces
  createSpace(name: string): Promise<SpaceView> {
    return this.request("POST", "/api/spaces", { name });
  }
  loadSpace(name: string): Promise<SpaceView> {
    return this.request("GET", `/api/spaces/${name}`);
  }
  joinSpace(name: string): Promise<SpaceView> {
    return this.request("POST", `/api/spaces/${name}/members`, {});
  }
  leaveSpace(name: string): Promise<SpaceView> {
    return this.request("DELETE", `/api/spaces/${name}/members`);
  }
  addWidget(space: string, widgetId: string, activity = "Start"): Promise<WidgetInstance> {
    return this.request("POST", `/api/spaces/${space}/widgets`, {
      widget_id: widgetId,
      activity,
    });
  }
  addBundle(space: string, bundleId: string, activity = "Start"): Promise<{ instances: WidgetInstance[] }> {
    return this.request("POST", `/api/spaces/${space}/bundles`, {
      bundle_id: bundleId,
      activity,
    });
  }
  removeWidget(space: string, instanceId: string): Promise<unknown> {
    return this.request("DELETE", `/api/spaces/${space}/widgets/${instanceId}`);
  }
  setLayout(space: string, instanceId: string, layout: InstanceLayout): Promise<unknown> {
    return this.request("PATCH", `/api/spaces/${space}/widgets/${instanceId}/layout`, layout);
  }
  widgetLoaded(space: string, instanceId: string): Promise<unknown> {
    return this.request("POST", `/api/spaces/${space}/widgets/${instanceId}/load`, {});
  }
  lint(space: string, learner?: string): Promise<{ findings: LintFinding[] }> {
    const params = learner ? `?learner=${encodeURIComponent(learner)}` : "";
    return this.request("GET", `/api/spaces/${space}/lint${params}`);
  }
  chatHistory(space: string, limit?: number): Promise<{ messages: { author: string; text: string; ts: number }[] }> {
    const params = limit ? `?limit=${limit}` : "";
    return this.request("GET", `/api/spaces/${space}/chat${params}`);
  }

  // learner model
  feed(learner: string): Promise<LearnerFeed> {
    return this.request("GET", `/api/learners/${learner}/feed`);
  }
  setGoal(learner: string, competence: Record<string, unknown>): Promise<LearnerFeed> {
    return this.request("POST", `/api/learners/${learner}/goals`, competence);
  }
  setAcquired(learner: string, competence: Record<string, unknown>): Promise<LearnerFeed> {
    return this.request("POST", `/api/learners/${learner}/competences`, competence);
  }

  // recommenders
  recommendWidgets(entity: string, learner?: string): Promise<{ recommendations: Recommendation[] }> {
    const params = new URLSearchParams({ entity });
    if (learner) params.set("learner", learner);
    return this.request("GET", `/api/recommend/widgets?${params}`);
  }
  acceptWidget(space: string, widgetId: string, activity = "Start"): Promise<WidgetInstance> {
    return this.request(
      "POST",
      `/api/recommend/widgets/accept?space=${encodeURIComponent(space)}`,
      { widget_id: widgetId, activity },
    );
  }
  nextActivity(learner: string): Promise<{ recommendation: Recommendation; state: SchedulerStateDoc }> {
    return this.request("POST", "/api/recommend/activity", { learner });
  }
  activityOutcome(
    learner: string,
    itemId: string,
    outcome: "accepted" | "skipped" | "drill_down",
  ): Promise<{ state: SchedulerStateDoc; techniques: Recommendation[] | null }> {
    return this.request("POST", "/api/recommend/activity/outcome", {
      learner,
      item_id: itemId,
      outcome,
    });
  }
  recommendContent(learner: string): Promise<{ recommendations: Recommendation[] }> {
    return this.request("GET", `/api/recommend/content?learner=${encodeURIComponent(learner)}`);
  }

  // monitor
  clusters(learner: string): Promise<{ clusters: ClusterRow[] }> {
    return this.request("GET", `/api/monitor/${learner}/clusters`);
  }
  profile(learner: string): Promise<StrategyProfile> {
    return this.request("GET", `/api/monitor/${learner}/profile`);
  }
  suggest(learner: string, signature: ClusterRow["signature"]): Promise<{ technique: string | null }> {
    return this.request("POST", `/api/monitor/${learner}/suggest`, signature);
  }
  assign(learner: string, signature: ClusterRow["signature"], technique: string): Promise<unknown> {
    return this.request("POST", `/api/monitor/${learner}/assign`, { ...signature, technique });
  }
  strategyTechniques(strategy: string): Promise<{ techniques: { id: string; name: string }[] }> {
    return this.request("GET", `/api/catalog/strategies/${strategy}/techniques`);
  }
  techniques(): Promise<{ techniques: { id: string; name: string; strategy: string }[] }> {
    return this.request("GET", "/api/catalog/techniques");
  }
}
